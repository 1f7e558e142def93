//! Bilinear square-identity maps `R^D -> R^d` for `(D, d)` in
//! `{(1,1), (2,2), (4,3), (8,5)}`, their matrix form and fiber angles.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;
const FOUR_PI: f64 = 4.0 * PI;

/// A point on the oscillator side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscPoint {
    u: Vec<f64>,
}

impl OscPoint {
    pub fn new(u: Vec<f64>) -> Result<Self> {
        if !matches!(u.len(), 1 | 2 | 4 | 8) {
            return Err(Error::UnsupportedDimension(u.len()));
        }
        if u.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        Ok(Self { u })
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.u.len()
    }

    #[must_use]
    pub fn coords(&self) -> &[f64] {
        &self.u
    }

    #[must_use]
    pub fn norm_sq(&self) -> f64 {
        self.u.iter().map(|c| c * c).sum()
    }
}

/// A point on the charge–dyon side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyonPoint {
    x: Vec<f64>,
}

impl DyonPoint {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if !matches!(x.len(), 1 | 2 | 3 | 5) {
            return Err(Error::UnsupportedDimension(x.len()));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        Ok(Self { x })
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    #[must_use]
    pub fn coords(&self) -> &[f64] {
        &self.x
    }

    #[must_use]
    pub fn norm(&self) -> f64 {
        self.x.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Square matrix `H(u; D)` with `H·Hᵀ = u²·I`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HurwitzMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl HurwitzMatrix {
    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[must_use]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    #[must_use]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// `H·v`.
    #[must_use]
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entry of `|H·Hᵀ - u²·I|`.
    #[must_use]
    pub fn gram_deviation(&self, norm_sq: f64) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let dot: f64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { norm_sq } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Fiber coordinates over a dyon-side point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberAngles {
    /// Oscillator dimension the angles belong to (4 or 8).
    pub dim: usize,
    /// In `[0, 2π)`.
    pub alpha: f64,
    /// In `[0, π]`.
    pub beta: f64,
    /// In `[0, 4π)`.
    pub gamma: f64,
}

/// Matrix form of the map for `D ∈ {2, 4, 8}`.
pub fn hurwitz_matrix(u: &OscPoint) -> Result<HurwitzMatrix> {
    let c = u.coords();
    let entries = match u.dim() {
        2 => {
            let (u1, u2) = (c[0], c[1]);
            vec![u1, -u2, u2, u1]
        }
        4 => {
            let (u1, u2, u3, u4) = (c[0], c[1], c[2], c[3]);
            #[rustfmt::skip]
            let m = vec![
                u3, -u4, u1, -u2,
                u4, u3, u2, u1,
                u1, u2, -u3, -u4,
                u2, -u1, -u4, u3,
            ];
            m
        }
        8 => {
            let [u0, u1, u2, u3, u4, u5, u6, u7] = <[f64; 8]>::try_from(c).expect("dim 8");
            #[rustfmt::skip]
            let m = vec![
                u0, u1, u2, u3, -u4, -u5, -u6, -u7,
                u4, u5, -u6, -u7, u0, u1, -u2, -u3,
                u5, -u4, u7, -u6, -u1, u0, -u3, u2,
                u6, u7, u4, u5, u2, u3, u0, u1,
                u7, -u6, -u5, u4, u3, -u2, -u1, u0,
                u1, -u0, u3, -u2, u5, -u4, u7, -u6,
                u2, -u3, -u0, u1, -u6, u7, u4, -u5,
                u3, u2, -u1, -u0, -u7, -u6, u5, u4,
            ];
            m
        }
        d => return Err(Error::UnsupportedDimension(d)),
    };
    Ok(HurwitzMatrix { dim: u.dim(), entries })
}

/// Dyon-side dimension paired with an oscillator dimension.
pub fn dyon_dim(osc_dim: usize) -> Result<usize> {
    match osc_dim {
        1 => Ok(1),
        2 => Ok(2),
        4 => Ok(3),
        8 => Ok(5),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// The bilinear map, written out term by term.
#[must_use]
pub fn forward_map(u: &OscPoint) -> DyonPoint {
    let c = u.coords();
    let x = match u.dim() {
        1 => vec![c[0] * c[0]],
        2 => vec![c[0] * c[0] - c[1] * c[1], 2.0 * c[0] * c[1]],
        4 => {
            let (u1, u2, u3, u4) = (c[0], c[1], c[2], c[3]);
            vec![
                2.0 * (u1 * u3 - u2 * u4),
                2.0 * (u1 * u4 + u2 * u3),
                u1 * u1 + u2 * u2 - u3 * u3 - u4 * u4,
            ]
        }
        _ => {
            let [u0, u1, u2, u3, u4, u5, u6, u7] = <[f64; 8]>::try_from(c).expect("dim 8");
            vec![
                u0 * u0 + u1 * u1 + u2 * u2 + u3 * u3 - u4 * u4 - u5 * u5 - u6 * u6 - u7 * u7,
                2.0 * (u0 * u4 + u1 * u5 - u2 * u6 - u3 * u7),
                2.0 * (u0 * u5 - u1 * u4 + u2 * u7 - u3 * u6),
                2.0 * (u0 * u6 + u1 * u7 + u2 * u4 + u3 * u5),
                2.0 * (u0 * u7 - u1 * u6 - u2 * u5 + u3 * u4),
            ]
        }
    };
    DyonPoint { x }
}

/// `(Σu²)² - Σx²` for `x = forward_map(u)`.
#[must_use]
pub fn euler_residual(u: &OscPoint) -> f64 {
    let n2 = u.norm_sq();
    let x = forward_map(u);
    n2 * n2 - x.coords().iter().map(|c| c * c).sum::<f64>()
}

/// Largest magnitude among the rows of `H·u` that do not feed `x`.
pub fn zero_rows_residual(u: &OscPoint) -> Result<f64> {
    if !matches!(u.dim(), 4 | 8) {
        return Err(Error::UnsupportedDimension(u.dim()));
    }
    let d = dyon_dim(u.dim())?;
    let hu = hurwitz_matrix(u)?.apply(u.coords());
    Ok(hu[d..].iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

fn wrap(angle: f64, period: f64) -> f64 {
    let r = angle.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Brings `α` into `[0, 2π)` and `γ` into `[0, 4π)`. The two pair
/// arguments are only known mod `2π`, so `α` and `γ` carry the same
/// multiple of `2π`; removing it from both leaves `γ` fixed mod `4π`.
fn reduce_pair(alpha: f64, gamma: f64) -> (f64, f64) {
    let k = (alpha / TWO_PI).floor();
    let alpha = wrap(alpha - TWO_PI * k, TWO_PI);
    let gamma = wrap(gamma - TWO_PI * k, FOUR_PI);
    (alpha, gamma)
}

/// Fiber angles of `u` for `D ∈ {4, 8}`.
///
/// For `D = 4` these invert [`ks_point`]. For `D = 8` they are the
/// arguments of `w0 = u0 + i u1` and `w2 = u2 + i u3`:
/// `α_T = arg w2 - arg w0`, `γ_T = arg w0 + arg w2`,
/// `β_T = 2·atan(|w0|/|w2|)`.
pub fn fiber_angles(u: &OscPoint) -> Result<FiberAngles> {
    let c = u.coords();
    match u.dim() {
        4 => {
            let (r1, r2) = (c[0].hypot(c[1]), c[2].hypot(c[3]));
            if r1 == 0.0 {
                return Err(Error::DegenerateFiber("u1 + i u2"));
            }
            if r2 == 0.0 {
                return Err(Error::DegenerateFiber("u3 + i u4"));
            }
            let a1 = c[1].atan2(c[0]);
            let a2 = c[3].atan2(c[2]);
            let (alpha, gamma) = reduce_pair(a1 + a2, a1 - a2);
            Ok(FiberAngles { dim: 4, alpha, beta: 2.0 * r2.atan2(r1), gamma })
        }
        8 => {
            let (r0, r2) = (c[0].hypot(c[1]), c[2].hypot(c[3]));
            if r0 == 0.0 {
                return Err(Error::DegenerateFiber("u0 + i u1"));
            }
            if r2 == 0.0 {
                return Err(Error::DegenerateFiber("u2 + i u3"));
            }
            let b0 = c[1].atan2(c[0]);
            let b2 = c[3].atan2(c[2]);
            let (alpha, gamma) = reduce_pair(b2 - b0, b0 + b2);
            Ok(FiberAngles { dim: 8, alpha, beta: 2.0 * r0.atan2(r2), gamma })
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Euler-angle parametrisation of `R^4`:
/// `u1 + i u2 = ρ cos(β/2) e^{i(α+γ)/2}`, `u3 + i u4 = ρ sin(β/2) e^{i(α-γ)/2}`.
#[must_use]
pub fn ks_point(radius: f64, alpha: f64, beta: f64, gamma: f64) -> OscPoint {
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let (p, q) = ((alpha + gamma) / 2.0, (alpha - gamma) / 2.0);
    OscPoint {
        u: vec![
            radius * c * p.cos(),
            radius * c * p.sin(),
            radius * s * q.cos(),
            radius * s * q.sin(),
        ],
    }
}
