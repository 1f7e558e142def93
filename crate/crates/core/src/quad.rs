//! Panelled quadrature on top of the `quadrature` crate's fixed rules.

use crate::error::{Error, Result};

/// Integration rule applied on each panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Tanh-sinh; tolerates integrable endpoint singularities.
    DoubleExponential,
    ClenshawCurtis,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Sums `rule` over consecutive panels `[breaks[i], breaks[i+1]]`.
///
/// Fails when the integrand produces non-finite values or when the summed
/// error estimate exceeds `tol · max(1, |value|)`.
pub fn integrate<F>(f: F, breaks: &[f64], rule: Rule, tol: f64) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    // the rules silently zero non-finite samples, so watch for them here
    let poisoned = std::cell::Cell::new(false);
    let f = |x: f64| {
        let y = f(x);
        if !y.is_finite() {
            poisoned.set(true);
        }
        y
    };
    let mut value = 0.0;
    let mut error = 0.0;
    let panel_tol = tol / breaks.len().max(2) as f64;
    for w in breaks.windows(2) {
        let out = match rule {
            Rule::DoubleExponential => quadrature::double_exponential::integrate(f, w[0], w[1], panel_tol),
            Rule::ClenshawCurtis => quadrature::clenshaw_curtis::integrate(f, w[0], w[1], panel_tol),
        };
        value += out.integral;
        error += out.error_estimate;
    }
    if poisoned.get() {
        return Err(Error::Quadrature { value: f64::NAN, error: f64::INFINITY });
    }
    if !value.is_finite() || !error.is_finite() || error > tol * value.abs().max(1.0) {
        return Err(Error::Quadrature { value, error });
    }
    Ok(Estimate { value, error })
}

/// Breakpoints `0, w/8, w/4, w/2, w, 2w, …` up to `end`, where `w` is a
/// characteristic width.
#[must_use]
pub fn half_line_breaks(width: f64, end: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut x = width / 8.0;
    while x < end {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(end);
    breaks
}

/// Uniform breakpoints on `[a, b]`.
#[must_use]
pub fn uniform_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect()
}
