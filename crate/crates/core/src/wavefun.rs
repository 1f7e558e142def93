//! Closed-form bound-state wavefunctions, their normalization and the
//! residuals of the equations they solve.
//!
//! Every radial factor has the shape `t^ℓ e^{-z/2} F(-n, c, z)` with
//! `z = b t^p` (`p = 1` Coulomb-like, `p = 2` oscillator-like), which is
//! what [`RadialProfile`] evaluates.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, Estimate, Rule};
use crate::specfun::{
    gauss2f1_derivatives, gauss2f1_terminating, hermite, kummer_derivatives, kummer_terminating,
    ln_factorial, log_gamma, wigner_small_d, HalfInt,
};
use crate::spectra::{dyon_energy, PhysicalParams, PowerTerm, QuantumNumbers, SystemId};

/// How the half-line anyon solution is continued to `x < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Extension {
    /// Only `x ≥ 0`; normalized on the half line.
    HalfLine,
    /// `Φ(-x) = Φ(x)`, normalized on the full line.
    #[default]
    Even,
    /// `Φ(-x) = -Φ(x)`, normalized on the full line.
    Odd,
}

/// A sampled amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveSample {
    pub point: Vec<f64>,
    pub re: f64,
    pub im: f64,
}

/// `t^ℓ e^{-decay·z/2} F(-n, c, z)` with `z = b t^power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    pub ell: f64,
    pub n: u32,
    pub c: f64,
    pub b: f64,
    pub power: f64,
    /// 1 for a true solution; other values exist only to test rejected
    /// readings of the exponent.
    pub decay: f64,
}

impl RadialProfile {
    #[must_use]
    pub fn coulomb(ell: f64, n: u32, c: f64, b: f64) -> Self {
        RadialProfile { ell, n, c, b, power: 1.0, decay: 1.0 }
    }

    #[must_use]
    pub fn gaussian(ell: f64, n: u32, c: f64, b: f64) -> Self {
        RadialProfile { ell, n, c, b, power: 2.0, decay: 1.0 }
    }

    fn z(&self, t: f64) -> f64 {
        self.b * t.powf(self.power)
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        let z = self.z(t);
        Ok(t.powf(self.ell) * (-0.5 * self.decay * z).exp() * kummer_terminating(self.n, self.c, z)?)
    }

    /// `[f, f', f'']` from the series derivatives.
    pub fn derivatives(&self, t: f64) -> Result<[f64; 3]> {
        let (ell, p, b, d) = (self.ell, self.power, self.b, self.decay);
        let z = self.z(t);
        let [g0, g1, g2] = kummer_derivatives(self.n, self.c, z)?;
        let envelope = t.powf(ell) * (-0.5 * d * z).exp();
        let zp = b * p * t.powf(p - 1.0);
        let zpp = b * p * (p - 1.0) * t.powf(p - 2.0);
        let a = ell / t - 0.5 * d * zp;
        let ap = -ell / (t * t) - 0.5 * d * zpp;
        let gp = g1 * zp;
        let gpp = g2 * zp * zp + g1 * zpp;
        Ok([
            envelope * g0,
            envelope * (a * g0 + gp),
            envelope * ((a * a + ap) * g0 + 2.0 * a * gp + gpp),
        ])
    }

    /// Where `z` reaches a value past which the profile is negligible.
    #[must_use]
    pub fn extent(&self) -> f64 {
        let z_end = 2.0 * (f64::from(self.n) + self.ell + self.c) + 60.0;
        (z_end / self.b).powf(1.0 / self.power)
    }

    /// Sign changes on `(0, extent)`.
    pub fn nodes(&self) -> Result<usize> {
        let end = self.extent();
        let mut count = 0;
        let mut last = self.value(end * 1e-6)?;
        for i in 1..=20_000 {
            let v = self.value(end * f64::from(i) / 20_000.0)?;
            if v != 0.0 && last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            if v != 0.0 {
                last = v;
            }
        }
        Ok(count)
    }

    /// `∫₀^∞ f(t)² t^q dt`, via the cached scaled integral.
    pub fn moment(&self, q: f64) -> Result<f64> {
        if self.decay != 1.0 {
            return Err(Error::InvalidParameter("moments need the true exponent".into()));
        }
        let p = self.power;
        let a = (2.0 * self.ell + q + 1.0) / p - 1.0;
        Ok(laguerre_integral(self.n, self.c, a)? * self.b.powf(-(a + 1.0)) / p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CacheKey {
    Laguerre { n: u32, c: u64, a: u64 },
    Angular { n_theta: u32, j2: i32, l2: i32 },
}

fn cache() -> &'static RwLock<HashMap<CacheKey, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(key: CacheKey, compute: impl FnOnce() -> Result<f64>) -> Result<f64> {
    if let Some(v) = cache().read().expect("cache poisoned").get(&key) {
        return Ok(*v);
    }
    let v = compute()?;
    cache().write().expect("cache poisoned").insert(key, v);
    Ok(v)
}

/// `∫₀^∞ z^a e^{-z} F(-n, c, z)² dz` by double-exponential quadrature.
pub fn laguerre_integral(n: u32, c: f64, a: f64) -> Result<f64> {
    if !(a > -1.0) {
        return Err(Error::Domain(format!("moment exponent {a} is not integrable")));
    }
    kummer_terminating(n, c, 0.0)?;
    let key = CacheKey::Laguerre { n, c: c.to_bits(), a: a.to_bits() };
    cached(key, || {
        // z = v² softens the endpoint behaviour of z^a
        let z_end = 2.0 * (a + 2.0 * f64::from(n)) + 80.0;
        let breaks = quad::uniform_breaks(0.0, z_end.sqrt(), 24);
        let f = |v: f64| {
            let z = v * v;
            let k = kummer_terminating(n, c, z).unwrap_or(f64::NAN);
            2.0 * v.powf(2.0 * a + 1.0) * (-z).exp() * k * k
        };
        Ok(quad::integrate(f, &breaks, Rule::DoubleExponential, 1e-13)?.value)
    })
}

/// `∫₀^π Z(θ)² sin³θ dθ` for the unnormalized angular factor.
fn ycm_angular_integral(n_theta: u32, j: HalfInt, l: HalfInt) -> Result<f64> {
    ycm_angular_z(n_theta, j, l, 1.0)?;
    let key = CacheKey::Angular { n_theta, j2: j.twice(), l2: l.twice() };
    cached(key, || {
        let f = |t: f64| {
            let z = ycm_angular_z(n_theta, j, l, t).unwrap_or(f64::NAN);
            z * z * t.sin().powi(3)
        };
        Ok(quad::integrate(f, &quad::uniform_breaks(0.0, PI, 8), Rule::DoubleExponential, 1e-13)?.value)
    })
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 || m.twice().abs() > j.twice() || (j - m).twice() % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!("projection {m} of {j}")));
    }
    Ok(())
}

// ---------------------------------------------------------------- anyon

fn anyon_scale(n: u32, nu: f64, params: &PhysicalParams) -> Result<(f64, f64)> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::Domain(format!("nu must be positive, got {nu}")));
    }
    let alpha = params.coupling()?;
    let q = f64::from(n) + nu;
    Ok((alpha, 2.0 * params.mu * alpha / (params.hbar * params.hbar * q)))
}

/// Half-line anyon solution `Φₙ^(ν)` in its closed normalized form, continued
/// to negative `x` per `ext`.
pub fn anyon_wavefn(n: u32, nu: f64, params: &PhysicalParams, x: f64, ext: Extension) -> Result<f64> {
    let (alpha, b) = anyon_scale(n, nu, params)?;
    let q = f64::from(n) + nu;
    let ln_norm = 0.5 * log_gamma(f64::from(n) + 2.0 * nu)? - log_gamma(2.0 * nu)? - 0.5 * ln_factorial(n);
    let constant = (params.mu * alpha).sqrt() / params.hbar / q * ln_norm.exp();
    let y = b * x.abs();
    let half_line = constant * y.powf(nu) * (-0.5 * y).exp() * kummer_terminating(n, 2.0 * nu, y)?;
    match ext {
        Extension::HalfLine if x < 0.0 => {
            Err(Error::Domain("half-line anyon is undefined for x < 0".into()))
        }
        Extension::HalfLine => Ok(half_line),
        Extension::Even => Ok(half_line / 2f64.sqrt()),
        Extension::Odd => Ok(x.signum() * half_line / 2f64.sqrt()),
    }
}

/// Normalized 1D oscillator eigenfunction `Ψ_N(u)` in the Hermite form.
pub fn oscillator_1d(level: u32, omega: f64, mu: f64, hbar: f64, u: f64) -> f64 {
    let a2 = mu * omega / hbar;
    let ln_norm = 0.25 * (a2 / PI).ln() - 0.5 * (f64::from(level) * 2f64.ln() + ln_factorial(level));
    ln_norm.exp() * (-0.5 * a2 * u * u).exp() * hermite(level, u * a2.sqrt())
}

/// `Φₙ^(ν)(x)` rebuilt from the oscillator level `N = 2n + 2ν - 1/2` at the
/// frequency where that level has energy `4α`; half-line normalization.
pub fn anyon_via_oscillator(n: u32, nu: f64, params: &PhysicalParams, x: f64) -> Result<f64> {
    let level = 2.0 * f64::from(n) + 2.0 * nu - 0.5;
    if (level - level.round()).abs() > 1e-12 || level < 0.0 {
        return Err(Error::InvalidParameter(format!("nu = {nu} has no oscillator partner")));
    }
    if x < 0.0 {
        return Err(Error::Domain("oscillator relation holds for x >= 0".into()));
    }
    let alpha = params.coupling()?;
    let q = f64::from(n) + nu;
    let omega = 2.0 * alpha / (params.hbar * q);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let pre = sign / 2f64.sqrt() * (params.mu * omega / (params.hbar * q)).sqrt();
    Ok(pre * x.powf(0.25) * oscillator_1d(level.round() as u32, omega, params.mu, params.hbar, x.sqrt()))
}

/// `∫ u² Ψ_N(u)² du` over the real line.
pub fn oscillator_second_moment(level: u32, omega: f64, mu: f64, hbar: f64) -> Result<Estimate> {
    let width = (hbar / (mu * omega)).sqrt();
    let end = width * ((2.0 * f64::from(level) + 1.0).sqrt() + 12.0);
    let f = |u: f64| {
        let psi = oscillator_1d(level, omega, mu, hbar, u);
        u * u * psi * psi
    };
    let half = quad::integrate(f, &quad::uniform_breaks(0.0, end, 16), Rule::DoubleExponential, 1e-14)?;
    Ok(Estimate { value: 2.0 * half.value, error: 2.0 * half.error })
}

// ------------------------------------------------------------ radial forms

fn osc_profile(dim: usize, n: u32, ell: f64, params: &PhysicalParams) -> Result<RadialProfile> {
    let omega = params.omega()?;
    Ok(RadialProfile::gaussian(ell, n, ell + dim as f64 / 2.0, params.mu * omega / params.hbar))
}

fn dyon2_profile(n: u32, m: i32, s: HalfInt, params: &PhysicalParams) -> Result<RadialProfile> {
    if s != HalfInt::ZERO && s != HalfInt::HALF {
        return Err(Error::InvalidQuantumNumbers(format!("s = {s} must be 0 or 1/2")));
    }
    let ell = (f64::from(m) + s.value()).abs();
    let q = f64::from(n) + ell + 0.5;
    let b = 2.0 * params.mu * params.coupling()? / (params.hbar * params.hbar * q);
    Ok(RadialProfile::coulomb(ell, n, 2.0 * ell + 1.0, b))
}

fn dyon3_profile(n: u32, j: HalfInt, params: &PhysicalParams) -> Result<RadialProfile> {
    let q = f64::from(n) + j.value() + 1.0;
    let b = 2.0 * params.mu * params.coupling()? / (params.hbar * params.hbar * q);
    Ok(RadialProfile::coulomb(j.value(), n, 2.0 * j.value() + 2.0, b))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || HalfInt::from_f64(lambda).is_none() {
        return Err(Error::InvalidQuantumNumbers(format!("lambda = {lambda} must be a nonnegative half-integer")));
    }
    Ok(())
}

fn ycm_profile(n_r: u32, lambda: f64, params: &PhysicalParams) -> Result<RadialProfile> {
    check_lambda(lambda)?;
    let k = params.mu * params.coupling()? / (params.hbar * params.hbar * (f64::from(n_r) + lambda + 2.0));
    Ok(RadialProfile::coulomb(lambda, n_r, 2.0 * lambda + 4.0, 2.0 * k))
}

fn inv_sqrt(x: f64) -> f64 {
    1.0 / x.sqrt()
}

// ------------------------------------------------------- wavefunctions

/// Normalized `Ψ̄ₙₘ^(s)(r, φ)` of the planar charge–dyon system.
pub fn dyon2_wavefn(n: u32, m: i32, s: HalfInt, params: &PhysicalParams, r: f64, phi: f64) -> Result<Complex64> {
    let profile = dyon2_profile(n, m, s, params)?;
    let c = inv_sqrt(2.0 * PI * profile.moment(1.0)?);
    Ok(Complex64::from_polar(c * profile.value(r)?, f64::from(m) * phi))
}

/// `Ψ^(s) = e^{isφ} Ψ̄^(s)`, before the reduction to the single sheet.
pub fn dyon2_unreduced(n: u32, m: i32, s: HalfInt, params: &PhysicalParams, r: f64, phi: f64) -> Result<Complex64> {
    Ok(Complex64::from_polar(1.0, s.value() * phi) * dyon2_wavefn(n, m, s, params, r, phi)?)
}

/// Normalized 2D oscillator state `Ψ_{n,M}(u, φ)`.
pub fn osc2_wavefn(n: u32, big_m: i32, params: &PhysicalParams, u: f64, phi: f64) -> Result<Complex64> {
    let profile = osc_profile(2, n, f64::from(big_m.abs()), params)?;
    let c = inv_sqrt(2.0 * PI * profile.moment(1.0)?);
    Ok(Complex64::from_polar(c * profile.value(u)?, f64::from(big_m) * phi))
}

/// Normalized 4D oscillator state in the fiber coordinates `(u, α, β, γ)`.
#[allow(clippy::too_many_arguments)]
pub fn osc4_wavefn(
    n: u32,
    j: HalfInt,
    m: HalfInt,
    s: HalfInt,
    params: &PhysicalParams,
    u: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<Complex64> {
    check_projection(j, m)?;
    check_projection(j, s)?;
    let profile = osc_profile(4, n, 2.0 * j.value(), params)?;
    let angular = 2.0 * PI * PI / (2.0 * j.value() + 1.0);
    let c = inv_sqrt(angular * profile.moment(3.0)?);
    let radial = c * profile.value(u)? * wigner_small_d(j, m, s, beta)?;
    Ok(Complex64::from_polar(radial, m.value() * alpha + s.value() * gamma))
}

/// Normalized `Ψ̄^(s)(r, α, β)` of the charge–dyon system in 3D.
#[allow(clippy::too_many_arguments)]
pub fn dyon3_wavefn(
    n: u32,
    j: HalfInt,
    m: HalfInt,
    s: HalfInt,
    params: &PhysicalParams,
    r: f64,
    alpha: f64,
    beta: f64,
) -> Result<Complex64> {
    check_projection(j, m)?;
    check_projection(j, s)?;
    let profile = dyon3_profile(n, j, params)?;
    let c = inv_sqrt(4.0 * PI / (2.0 * j.value() + 1.0) * profile.moment(2.0)?);
    let radial = c * profile.value(r)? * wigner_small_d(j, m, s, beta)?;
    Ok(Complex64::from_polar(radial, (m - s).value() * alpha))
}

/// `(1 - cos θ)^L (1 + cos θ)^J F(-n_θ, n_θ + 2J + 2L + 3, 2L + 2; (1 - cos θ)/2)`.
pub fn ycm_angular_z(n_theta: u32, j: HalfInt, l: HalfInt, theta: f64) -> Result<f64> {
    if j.twice() < 0 || l.twice() < 0 {
        return Err(Error::InvalidQuantumNumbers(format!("J = {j}, L = {l} must be nonnegative")));
    }
    let (jv, lv) = (j.value(), l.value());
    let (one_minus, one_plus) = half_angle_factors(theta);
    let b = f64::from(n_theta) + 2.0 * jv + 2.0 * lv + 3.0;
    let f = gauss2f1_terminating(n_theta, b, 2.0 * lv + 2.0, one_minus / 2.0)?;
    Ok(one_minus.powf(lv) * one_plus.powf(jv) * f)
}

/// `(1 - cos θ, 1 + cos θ)` without cancellation near the poles.
fn half_angle_factors(theta: f64) -> (f64, f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    (2.0 * s * s, 2.0 * c * c)
}

/// `r^λ e^{-kr} F(-n_r, 2λ + 4, 2kr)`, unnormalized.
pub fn ycm_radial_r(n_r: u32, lambda: f64, params: &PhysicalParams, r: f64) -> Result<f64> {
    ycm_profile(n_r, lambda, params)?.value(r)
}

/// Normalized `R(r) Z(θ)` for the Yang–Coulomb monopole, with
/// `λ = n_θ + J + L`.
pub fn ycm_wavefn(
    n_r: u32,
    n_theta: u32,
    j: HalfInt,
    l: HalfInt,
    params: &PhysicalParams,
    r: f64,
    theta: f64,
) -> Result<f64> {
    let lambda = f64::from(n_theta) + j.value() + l.value();
    let profile = ycm_profile(n_r, lambda, params)?;
    let c = inv_sqrt(profile.moment(4.0)? * ycm_angular_integral(n_theta, j, l)?);
    Ok(c * profile.value(r)? * ycm_angular_z(n_theta, j, l, theta)?)
}

/// Evaluates the normalized wavefunction of `system` at `point`.
///
/// Coordinates: `[x]` anyon, `[u]` osc1, `[u, φ]` osc2, `[u, α, β, γ]` osc4,
/// `[r, φ]` dyon2, `[r, α, β]` dyon3, `[r, θ]` ycm5.
pub fn evaluate(
    system: &SystemId,
    qn: &QuantumNumbers,
    params: &PhysicalParams,
    point: &[f64],
) -> Result<Complex64> {
    qn.validate(system)?;
    let want = |k: usize| -> Result<()> {
        if point.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{system} takes {k} coordinates, got {}", point.len())))
        }
    };
    match (*system, *qn) {
        (SystemId::Anyon1 { nu }, QuantumNumbers::Anyon1 { n }) => {
            want(1)?;
            Ok(anyon_wavefn(n, nu, params, point[0], Extension::Even)?.into())
        }
        (SystemId::Osc { dim: 1 }, QuantumNumbers::Osc1 { n }) => {
            want(1)?;
            Ok(oscillator_1d(n, params.omega()?, params.mu, params.hbar, point[0]).into())
        }
        (SystemId::Osc { dim: 2 }, QuantumNumbers::Osc2 { n, m }) => {
            want(2)?;
            osc2_wavefn(n, m, params, point[0], point[1])
        }
        (SystemId::Osc { dim: 4 }, QuantumNumbers::Osc4 { n, j, m, s }) => {
            want(4)?;
            osc4_wavefn(n, j, m, s, params, point[0], point[1], point[2], point[3])
        }
        (SystemId::Dyon2 { .. }, QuantumNumbers::Dyon2 { n, m, s }) => {
            want(2)?;
            dyon2_wavefn(n, m, s, params, point[0], point[1])
        }
        (SystemId::Dyon3 { .. }, QuantumNumbers::Dyon3 { n, j, m, s }) => {
            want(3)?;
            dyon3_wavefn(n, j, m, s, params, point[0], point[1], point[2])
        }
        (SystemId::Ycm5 { .. }, QuantumNumbers::Ycm5 { n_r, n_theta, j, l, .. }) => {
            want(2)?;
            Ok(ycm_wavefn(n_r, n_theta, j, l, params, point[0], point[1])?.into())
        }
        _ => Err(Error::UnsupportedDimension(8)),
    }
}

// ------------------------------------------------------- normalization

const VERIFY_PANELS: usize = 32;

/// `∫₀^∞ g(t) dt` through `t = v²` with Clenshaw–Curtis panels.
fn cc_half_line(g: impl Fn(f64) -> f64, end: f64) -> Result<Estimate> {
    let breaks = quad::uniform_breaks(0.0, end.sqrt(), VERIFY_PANELS);
    quad::integrate(|v: f64| 2.0 * v * g(v * v), &breaks, Rule::ClenshawCurtis, 1e-11)
}

/// `∫₀^π |d^j_{ms}(β)|² sin β dβ`.
fn cc_wigner(j: HalfInt, m: HalfInt, s: HalfInt) -> Result<Estimate> {
    let f = |b: f64| {
        let d = wigner_small_d(j, m, s, b).unwrap_or(f64::NAN);
        d * d * b.sin()
    };
    quad::integrate(f, &quad::uniform_breaks(0.0, PI, 8), Rule::ClenshawCurtis, 1e-12)
}

fn combine(parts: &[Estimate], factor: f64) -> Estimate {
    let value: f64 = parts.iter().map(|e| e.value).product::<f64>() * factor;
    let rel: f64 = parts.iter().map(|e| e.error / e.value.abs().max(f64::MIN_POSITIVE)).sum();
    Estimate { value, error: value.abs() * rel }
}

/// `∫|Ψ|²` over the full configuration space with the system's measure,
/// recomputed by Clenshaw–Curtis in physical coordinates from the
/// normalized wavefunctions. Should be 1.
///
/// Osc8 is not assembled; for Ycm5 the `R(r) Z(θ)` factor is checked against
/// `r⁴ dr sin³θ dθ`, the remaining group-manifold factor being unit-normalized
/// by construction.
pub fn normalization(system: &SystemId, qn: &QuantumNumbers, params: &PhysicalParams) -> Result<Estimate> {
    qn.validate(system)?;
    let sq = |z: Result<Complex64>| z.map_or(f64::NAN, |z| z.norm_sqr());
    let one = Estimate { value: 1.0, error: 0.0 };
    let est = match (*system, *qn) {
        (SystemId::Anyon1 { nu }, QuantumNumbers::Anyon1 { n }) => {
            let (_, b) = anyon_scale(n, nu, params)?;
            let end = (2.0 * (f64::from(n) + nu) + 60.0 + 2.0 * f64::from(n)) / b;
            let g = |x: f64| anyon_wavefn(n, nu, params, x, Extension::Even).map_or(f64::NAN, |v| v * v);
            combine(&[cc_half_line(g, end)?], 2.0)
        }
        (SystemId::Osc { dim: 1 }, QuantumNumbers::Osc1 { n }) => {
            let omega = params.omega()?;
            let end = osc_profile(1, n / 2, f64::from(n % 2), params)?.extent();
            let g = |u: f64| oscillator_1d(n, omega, params.mu, params.hbar, u).powi(2);
            combine(&[cc_half_line(g, end)?], 2.0)
        }
        (SystemId::Osc { dim: 2 }, QuantumNumbers::Osc2 { n, m }) => {
            let end = osc_profile(2, n, f64::from(m.abs()), params)?.extent();
            let g = |u: f64| u * sq(osc2_wavefn(n, m, params, u, 0.0));
            combine(&[cc_half_line(g, end)?], 2.0 * PI)
        }
        (SystemId::Dyon2 { .. }, QuantumNumbers::Dyon2 { n, m, s }) => {
            let end = dyon2_profile(n, m, s, params)?.extent();
            let g = |r: f64| r * sq(dyon2_wavefn(n, m, s, params, r, 0.0));
            combine(&[cc_half_line(g, end)?], 2.0 * PI)
        }
        (SystemId::Osc { dim: 4 }, QuantumNumbers::Osc4 { n, j, m, s }) => {
            let end = osc_profile(4, n, 2.0 * j.value(), params)?.extent();
            let d = cc_wigner(j, m, s)?;
            // strip the angular factor so the radial integrand is smooth
            let d0 = wigner_small_d(j, m, s, 1.0)?;
            if d0 == 0.0 {
                return Err(Error::Singular("reference angle on a node of d".into()));
            }
            let g = |u: f64| u.powi(3) / 8.0 * sq(osc4_wavefn(n, j, m, s, params, u, 0.0, 1.0, 0.0)) / (d0 * d0);
            combine(&[cc_half_line(g, end)?, d], 2.0 * PI * 4.0 * PI)
        }
        (SystemId::Dyon3 { .. }, QuantumNumbers::Dyon3 { n, j, m, s }) => {
            let end = dyon3_profile(n, j, params)?.extent();
            let d = cc_wigner(j, m, s)?;
            let d0 = wigner_small_d(j, m, s, 1.0)?;
            if d0 == 0.0 {
                return Err(Error::Singular("reference angle on a node of d".into()));
            }
            let g = |r: f64| r * r * sq(dyon3_wavefn(n, j, m, s, params, r, 0.0, 1.0)) / (d0 * d0);
            combine(&[cc_half_line(g, end)?, d], 2.0 * PI)
        }
        (SystemId::Ycm5 { .. }, QuantumNumbers::Ycm5 { n_r, n_theta, j, l, .. }) => {
            let lambda = f64::from(n_theta) + j.value() + l.value();
            let end = ycm_profile(n_r, lambda, params)?.extent();
            let t0 = 1.0;
            let z0 = ycm_angular_z(n_theta, j, l, t0)?;
            if z0 == 0.0 {
                return Err(Error::Singular("reference angle on a node of Z".into()));
            }
            let g = |r: f64| {
                let v = ycm_wavefn(n_r, n_theta, j, l, params, r, t0).unwrap_or(f64::NAN) / z0;
                r.powi(4) * v * v
            };
            let h = |t: f64| {
                let z = ycm_angular_z(n_theta, j, l, t).unwrap_or(f64::NAN);
                z * z * t.sin().powi(3)
            };
            let angular = quad::integrate(h, &quad::uniform_breaks(0.0, PI, 8), Rule::ClenshawCurtis, 1e-12)?;
            combine(&[cc_half_line(g, end)?, angular, one], 1.0)
        }
        _ => return Err(Error::UnsupportedDimension(8)),
    };
    Ok(est)
}

// ------------------------------------------------------- ODE residuals

/// Residual of a closed form against its governing equation on a 500-point
/// interior grid. `analytic` uses series derivatives; `coarse` and `fine`
/// use centred differences at steps `h` and `h/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub analytic: f64,
    pub coarse: f64,
    pub fine: f64,
}

impl ResidualReport {
    /// `coarse / fine`; close to 4 for a second-order scheme.
    #[must_use]
    pub fn refinement_ratio(&self) -> f64 {
        self.coarse / self.fine
    }
}

/// An ordinary differential equation with a closed-form solution.
pub trait ClosedFormOde {
    /// Open interval sampled by the residual grid.
    fn span(&self) -> (f64, f64);
    /// `[f, f', f'']`.
    fn derivatives(&self, t: f64) -> Result<[f64; 3]>;
    /// Individual terms of the equation; they sum to zero on a solution.
    fn terms(&self, t: f64, d: [f64; 3]) -> Vec<f64>;
}

/// `f'' + (first/t) f' - (centrifugal/t²) f + scale (E - V(t)) f = 0`,
/// `V(t) = Σ coef · t^power`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialOde {
    pub profile: RadialProfile,
    pub first: f64,
    pub centrifugal: f64,
    pub scale: f64,
    pub energy: f64,
    pub potential: Vec<PowerTerm>,
}

impl ClosedFormOde for RadialOde {
    fn span(&self) -> (f64, f64) {
        (0.0, self.profile.extent())
    }
    fn derivatives(&self, t: f64) -> Result<[f64; 3]> {
        self.profile.derivatives(t)
    }
    fn terms(&self, t: f64, [f, fp, fpp]: [f64; 3]) -> Vec<f64> {
        let mut out = vec![fpp, self.first / t * fp, -self.centrifugal / (t * t) * f, self.scale * self.energy * f];
        out.extend(self.potential.iter().map(|p| -self.scale * p.coef * t.powf(p.power) * f));
        out
    }
}

/// The polar-angle equation of the Yang–Coulomb monopole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YcmAngularOde {
    pub n_theta: u32,
    pub j: HalfInt,
    pub l: HalfInt,
}

impl ClosedFormOde for YcmAngularOde {
    fn span(&self) -> (f64, f64) {
        (0.0, PI)
    }
    fn derivatives(&self, theta: f64) -> Result<[f64; 3]> {
        let (jv, lv) = (self.j.value(), self.l.value());
        let (s, c) = theta.sin_cos();
        let (one_minus, one_plus) = half_angle_factors(theta);
        let b = f64::from(self.n_theta) + 2.0 * jv + 2.0 * lv + 3.0;
        let [g, gy, gyy] = gauss2f1_derivatives(self.n_theta, b, 2.0 * lv + 2.0, one_minus / 2.0)?;
        let envelope = one_minus.powf(lv) * one_plus.powf(jv);
        let a = lv * s / one_minus - jv * s / one_plus;
        let ap = -lv / one_minus - jv / one_plus;
        let gp = gy * s / 2.0;
        let gpp = gyy * s * s / 4.0 + gy * c / 2.0;
        Ok([
            envelope * g,
            envelope * (a * g + gp),
            envelope * ((a * a + ap) * g + 2.0 * a * gp + gpp),
        ])
    }
    fn terms(&self, theta: f64, [z, zp, zpp]: [f64; 3]) -> Vec<f64> {
        let (jv, lv) = (self.j.value(), self.l.value());
        let lambda = f64::from(self.n_theta) + jv + lv;
        let (s, c) = theta.sin_cos();
        let (one_minus, one_plus) = half_angle_factors(theta);
        vec![
            zpp,
            3.0 * c / s * zp,
            -2.0 * lv * (lv + 1.0) / one_minus * z,
            -2.0 * jv * (jv + 1.0) / one_plus * z,
            lambda * (lambda + 3.0) * z,
        ]
    }
}

const RESIDUAL_POINTS: usize = 500;

fn normalized(terms: &[f64]) -> (f64, f64) {
    (terms.iter().sum::<f64>().abs(), terms.iter().map(|t| t.abs()).sum())
}

/// Evaluates `ode` on its residual grid.
pub fn residual_report(ode: &dyn ClosedFormOde) -> Result<ResidualReport> {
    let (a, b) = ode.span();
    // below the first grid offset, so every stencil stays inside the span
    let h = (b - a) / 2500.0;
    let (mut worst, mut worst_coarse, mut worst_fine, mut scale) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 1..=RESIDUAL_POINTS {
        let t = a + (b - a) * i as f64 / (RESIDUAL_POINTS + 1) as f64;
        let d = ode.derivatives(t)?;
        let (res, sc) = normalized(&ode.terms(t, d));
        worst = worst.max(res);
        scale = scale.max(sc);
        for (step, slot) in [(h, &mut worst_coarse), (h / 2.0, &mut worst_fine)] {
            let fm = ode.derivatives(t - step)?[0];
            let fp = ode.derivatives(t + step)?[0];
            let fd = [d[0], (fp - fm) / (2.0 * step), (fp - 2.0 * d[0] + fm) / (step * step)];
            *slot = slot.max(normalized(&ode.terms(t, fd)).0);
        }
    }
    if scale == 0.0 {
        // every term vanishes identically, e.g. a constant solution
        return Ok(ResidualReport { analytic: 0.0, coarse: 0.0, fine: 0.0 });
    }
    Ok(ResidualReport { analytic: worst / scale, coarse: worst_coarse / scale, fine: worst_fine / scale })
}

fn coulomb_ode(
    profile: RadialProfile,
    first: f64,
    centrifugal: f64,
    energy: f64,
    params: &PhysicalParams,
    extra: Option<PowerTerm>,
) -> Result<RadialOde> {
    let mut potential = vec![PowerTerm { coef: -params.coupling()?, power: -1.0 }];
    potential.extend(extra);
    Ok(RadialOde {
        profile,
        first,
        centrifugal,
        scale: 2.0 * params.mu / (params.hbar * params.hbar),
        energy,
        potential,
    })
}

/// Radial equation solved by the closed form of `system` in state `qn`,
/// with `e² = α` the Coulomb coupling of `params` (or the frequency, for
/// oscillators).
pub fn governing_ode(system: &SystemId, qn: &QuantumNumbers, params: &PhysicalParams) -> Result<RadialOde> {
    qn.validate(system)?;
    let hbar = params.hbar;
    match (*system, *qn) {
        (SystemId::Anyon1 { nu }, QuantumNumbers::Anyon1 { n }) => {
            let (_, b) = anyon_scale(n, nu, params)?;
            let profile = RadialProfile::coulomb(nu, n, 2.0 * nu, b);
            coulomb_ode(profile, 0.0, nu * (nu - 1.0), dyon_energy(system, qn, params)?, params, None)
        }
        (SystemId::Dyon2 { .. }, QuantumNumbers::Dyon2 { n, m, s }) => {
            let profile = dyon2_profile(n, m, s, params)?;
            let ms = f64::from(m) + s.value();
            coulomb_ode(profile, 1.0, ms * ms, dyon_energy(system, qn, params)?, params, None)
        }
        (SystemId::Dyon3 { .. }, QuantumNumbers::Dyon3 { n, j, s, .. }) => {
            let profile = dyon3_profile(n, j, params)?;
            let (jv, sv) = (j.value(), s.value());
            let goldhaber = PowerTerm { coef: hbar * hbar * sv * sv / (2.0 * params.mu), power: -2.0 };
            let energy = dyon_energy(system, qn, params)?;
            coulomb_ode(profile, 2.0, jv * (jv + 1.0) - sv * sv, energy, params, Some(goldhaber))
        }
        (SystemId::Ycm5 { .. }, QuantumNumbers::Ycm5 { n_r, n_theta, j, l, .. }) => {
            let lambda = f64::from(n_theta) + j.value() + l.value();
            let profile = ycm_profile(n_r, lambda, params)?;
            let energy = dyon_energy(system, qn, params)?;
            coulomb_ode(profile, 4.0, lambda * (lambda + 3.0), energy, params, None)
        }
        (SystemId::Osc { dim }, _) => {
            let (n, ell) = match *qn {
                QuantumNumbers::Osc1 { n } => (n / 2, f64::from(n % 2)),
                QuantumNumbers::Osc2 { n, m } => (n, f64::from(m.abs())),
                QuantumNumbers::Osc4 { n, j, .. } => (n, 2.0 * j.value()),
                _ => return Err(Error::UnsupportedDimension(dim)),
            };
            let omega = params.omega()?;
            let d = dim as f64;
            Ok(RadialOde {
                profile: osc_profile(dim, n, ell, params)?,
                first: d - 1.0,
                centrifugal: ell * (ell + d - 2.0),
                scale: 2.0 * params.mu / (hbar * hbar),
                energy: hbar * omega * (2.0 * f64::from(n) + ell + d / 2.0),
                potential: vec![PowerTerm { coef: 0.5 * params.mu * omega * omega, power: 2.0 }],
            })
        }
        _ => Err(Error::UnsupportedDimension(8)),
    }
}

/// The 2D oscillator equation applied to the Gaussian `e^{-μωu²/ħ}` instead
/// of `e^{-μωu²/2ħ}`.
pub fn osc2_rejected_exponent_ode(n: u32, big_m: i32, params: &PhysicalParams) -> Result<RadialOde> {
    let qn = QuantumNumbers::Osc2 { n, m: big_m };
    let mut ode = governing_ode(&SystemId::Osc { dim: 2 }, &qn, params)?;
    ode.profile.decay = 2.0;
    Ok(ode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::Regime;

    const H: fn(i32) -> HalfInt = HalfInt::from_twice;

    fn coupling(e2: f64) -> PhysicalParams {
        PhysicalParams::natural(Regime::DyonCoupling { e2 })
    }

    #[test]
    fn ground_state_shapes() {
        let p = coupling(1.0);
        // n = 0: Φ ∝ y^ν e^{-y/2}
        let a = anyon_wavefn(0, 0.25, &p, 0.3, Extension::HalfLine).unwrap();
        let b = anyon_wavefn(0, 0.25, &p, 1.1, Extension::HalfLine).unwrap();
        let y = |x: f64| 2.0 * x / 0.25;
        let shape = |x: f64| y(x).powf(0.25) * (-y(x) / 2.0).exp();
        assert!((a / b - shape(0.3) / shape(1.1)).abs() < 1e-14);
        assert!(anyon_wavefn(0, 0.25, &p, -1.0, Extension::HalfLine).is_err());
        let even = anyon_wavefn(1, 0.25, &p, -0.7, Extension::Even).unwrap();
        let odd = anyon_wavefn(1, 0.25, &p, -0.7, Extension::Odd).unwrap();
        assert_eq!(even, -odd);
        assert_eq!(ycm_angular_z(0, H(0), H(0), 0.4).unwrap(), 1.0);
        let r = ycm_radial_r(0, 0.0, &p, 1.3).unwrap();
        assert!((r - (-1.3f64 / 2.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn laguerre_integral_matches_gamma_closed_forms() {
        // weight z^{c-1}: n! Γ(c)² / Γ(n + c); weight z^c: that times (2n + c)
        for (n, c) in [(0u32, 1.0), (3, 2.5), (5, 0.5), (2, 4.0)] {
            let ortho = (ln_factorial(n) + 2.0 * log_gamma(c).unwrap() - log_gamma(f64::from(n) + c).unwrap()).exp();
            let got = laguerre_integral(n, c, c - 1.0).unwrap();
            assert!((got / ortho - 1.0).abs() < 1e-12, "n={n} c={c} {got} {ortho}");
            let got = laguerre_integral(n, c, c).unwrap();
            assert!((got / (ortho * (2.0 * f64::from(n) + c)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_derivatives_match_differences() {
        let p = RadialProfile::gaussian(1.5, 3, 3.5, 0.8);
        let t = 1.3;
        let h = 1e-4;
        let d = p.derivatives(t).unwrap();
        let (fm, fp) = (p.value(t - h).unwrap(), p.value(t + h).unwrap());
        assert!((d[1] - (fp - fm) / (2.0 * h)).abs() < 1e-7);
        assert!((d[2] - (fp - 2.0 * d[0] + fm) / (h * h)).abs() < 1e-5);
    }

    #[test]
    fn node_counts_equal_radial_numbers() {
        let p = coupling(1.0);
        for n_r in 0..=4 {
            let profile = ycm_profile(n_r, 1.5, &p).unwrap();
            assert_eq!(profile.nodes().unwrap(), n_r as usize);
        }
    }

    #[test]
    fn rejected_exponent_fails_the_equation() {
        let p = PhysicalParams::natural(Regime::Oscillator { omega: 1.3 });
        let good = governing_ode(&SystemId::Osc { dim: 2 }, &QuantumNumbers::Osc2 { n: 1, m: 2 }, &p).unwrap();
        assert!(residual_report(&good).unwrap().analytic < 1e-10);
        let bad = osc2_rejected_exponent_ode(1, 2, &p).unwrap();
        assert!(residual_report(&bad).unwrap().analytic > 1e-2);
    }

    #[test]
    fn single_valuedness_and_fiber_period() {
        let p = coupling(1.0);
        for (s, sign) in [(H(0), 1.0), (H(1), -1.0)] {
            let a = dyon2_unreduced(1, 0, s, &p, 0.8, 0.3).unwrap();
            let b = dyon2_unreduced(1, 0, s, &p, 0.8, 0.3 + 2.0 * PI).unwrap();
            assert!((b - sign * a).norm() < 1e-14 * a.norm());
            let c = dyon2_wavefn(1, 0, s, &p, 0.8, 0.3 + 2.0 * PI).unwrap();
            assert!((c - dyon2_wavefn(1, 0, s, &p, 0.8, 0.3).unwrap()).norm() < 1e-14);
        }
        let o = PhysicalParams::natural(Regime::Oscillator { omega: 1.0 });
        let a = osc4_wavefn(0, H(1), H(1), H(-1), &o, 0.9, 0.2, 0.7, 0.4).unwrap();
        let b = osc4_wavefn(0, H(1), H(1), H(-1), &o, 0.9, 0.2, 0.7, 0.4 + 4.0 * PI).unwrap();
        assert!((a - b).norm() < 1e-13 * a.norm());
    }
}
