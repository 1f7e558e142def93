//! Monopole vector potentials: the 2D vortex, the 3D Dirac monopole and
//! the 5D Yang triplet, plus loop-integral diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::HalfInt;

/// Points closer than this (relative) to a string are rejected.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Magnetic charge fixed by Dirac quantization, `g = ħ c s / e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagneticCharge {
    g: f64,
    s: HalfInt,
    e: f64,
    hbar: f64,
    c: f64,
}

impl MagneticCharge {
    #[must_use]
    pub fn g(&self) -> f64 {
        self.g
    }
    #[must_use]
    pub fn s(&self) -> HalfInt {
        self.s
    }
    #[must_use]
    pub fn e(&self) -> f64 {
        self.e
    }
    #[must_use]
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    #[must_use]
    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Builds the monopole charge for monopole number `s`, which must be a
/// multiple of 1/2.
pub fn dirac_charge(s: f64, e: f64, hbar: f64, c: f64) -> Result<MagneticCharge> {
    let s = HalfInt::from_f64(s).ok_or(Error::QuantizationViolation(s))?;
    if e == 0.0 || !e.is_finite() {
        return Err(Error::Domain(format!("electric charge must be nonzero, got {e}")));
    }
    if !(hbar > 0.0 && c > 0.0) {
        return Err(Error::Domain("hbar and c must be positive".into()));
    }
    Ok(MagneticCharge { g: hbar * c * s.value() / e, s, e, hbar, c })
}

/// `ħ² s² / (2 μ r²)`.
pub fn goldhaber_term(s: HalfInt, mu: f64, hbar: f64, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Err(Error::Singular("Goldhaber term at r = 0".into()));
    }
    let s = s.value();
    Ok(hbar * hbar * s * s / (2.0 * mu * r * r))
}

/// `(g/r²)(x₂, -x₁)`.
pub fn vortex_potential(g: f64, x1: f64, x2: f64) -> Result<[f64; 2]> {
    let r2 = x1 * x1 + x2 * x2;
    if r2 == 0.0 {
        return Err(Error::Singular("vortex potential at the origin".into()));
    }
    Ok([g * x2 / r2, -g * x1 / r2])
}

/// Dirac potential in spherical coordinates; the string runs along `β = π`.
pub fn dirac_potential(g: f64, r: f64, alpha: f64, beta: f64) -> Result<[f64; 3]> {
    if !(r > 0.0) {
        return Err(Error::Singular(format!("Dirac potential needs r > 0, got {r}")));
    }
    let one_plus = 1.0 + beta.cos();
    if one_plus < SINGULAR_TOL {
        return Err(Error::Singular("point on the Dirac string".into()));
    }
    let pre = g * beta.sin() / (r * one_plus);
    Ok([pre * alpha.sin(), -pre * alpha.cos(), 0.0])
}

/// Dirac potential at a Cartesian point, `g (x₂, -x₁, 0) / (r (r + x₃))`.
pub fn dirac_potential_cartesian(g: f64, x: [f64; 3]) -> Result<[f64; 3]> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 || r + x[2] < SINGULAR_TOL * r {
        return Err(Error::Singular("point on the Dirac string".into()));
    }
    let pre = g / (r * (r + x[2]));
    Ok([pre * x[1], -pre * x[0], 0.0])
}

/// The Yang triplet `A¹, A², A³` at a point `(x₀, …, x₄)`.
pub fn yang_potentials(x: [f64; 5]) -> Result<[[f64; 5]; 3]> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 || r + x[0] < SINGULAR_TOL * r {
        return Err(Error::Singular("point on the Yang singular line".into()));
    }
    let k = 1.0 / (r * (r + x[0]));
    let [_, x1, x2, x3, x4] = x;
    Ok([
        [0.0, -k * x4, -k * x3, k * x2, k * x1],
        [0.0, k * x3, -k * x4, -k * x1, k * x2],
        [0.0, k * x2, -k * x1, k * x4, -k * x3],
    ])
}

/// A gauge field that can be sampled at a Cartesian point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GaugeField {
    Vortex { g: f64 },
    Dirac { g: f64 },
    /// `component` is 1, 2 or 3.
    Yang { component: usize },
}

impl GaugeField {
    #[must_use]
    pub fn dim(&self) -> usize {
        match self {
            GaugeField::Vortex { .. } => 2,
            GaugeField::Dirac { .. } => 3,
            GaugeField::Yang { .. } => 5,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::UnsupportedDimension(x.len()));
        }
        Ok(match *self {
            GaugeField::Vortex { g } => vortex_potential(g, x[0], x[1])?.to_vec(),
            GaugeField::Dirac { g } => dirac_potential_cartesian(g, [x[0], x[1], x[2]])?.to_vec(),
            GaugeField::Yang { component } => {
                if !(1..=3).contains(&component) {
                    return Err(Error::InvalidParameter(format!("Yang component {component}")));
                }
                let mut p = [0.0; 5];
                p.copy_from_slice(x);
                yang_potentials(p)?[component - 1].to_vec()
            }
        })
    }
}

/// Circle `center + radius (cos t · e1 + sin t · e2)`, `t ∈ [0, 2π)`;
/// `e1`, `e2` should be orthonormal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Vec<f64>,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    pub radius: f64,
}

impl Circle {
    /// Origin-centred circle in the plane.
    #[must_use]
    pub fn planar(radius: f64) -> Self {
        Circle { center: vec![0.0, 0.0], e1: vec![1.0, 0.0], e2: vec![0.0, 1.0], radius }
    }

    /// Latitude circle at polar angle `beta` on the sphere of radius `r`,
    /// traversed with increasing azimuth.
    #[must_use]
    pub fn latitude(r: f64, beta: f64) -> Self {
        Circle {
            center: vec![0.0, 0.0, r * beta.cos()],
            e1: vec![1.0, 0.0, 0.0],
            e2: vec![0.0, 1.0, 0.0],
            radius: r * beta.sin(),
        }
    }
}

pub const CIRCULATION_PANELS: usize = 10_000;

/// `∮ A·dl` by composite Simpson over [`CIRCULATION_PANELS`] panels.
pub fn circulation(field: &GaugeField, path: &Circle) -> Result<f64> {
    let dim = field.dim();
    if path.center.len() != dim || path.e1.len() != dim || path.e2.len() != dim {
        return Err(Error::UnsupportedDimension(path.center.len()));
    }
    let integrand = |t: f64| -> Result<f64> {
        let (s, c) = t.sin_cos();
        let point: Vec<f64> = (0..dim)
            .map(|i| path.center[i] + path.radius * (c * path.e1[i] + s * path.e2[i]))
            .collect();
        let a = field.evaluate(&point)?;
        Ok((0..dim).map(|i| a[i] * path.radius * (-s * path.e1[i] + c * path.e2[i])).sum())
    };
    let n = CIRCULATION_PANELS;
    let h = std::f64::consts::TAU / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        let t0 = k as f64 * h;
        sum += integrand(t0)? + 4.0 * integrand(t0 + 0.5 * h)? + integrand(t0 + h)?;
    }
    Ok(sum * h / 6.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn charge_quantization() {
        assert_eq!(dirac_charge(0.5, 1.0, 1.0, 1.0).unwrap().g(), 0.5);
        assert_eq!(dirac_charge(0.0, 1.0, 1.0, 1.0).unwrap().g(), 0.0);
        assert!(matches!(dirac_charge(0.3, 1.0, 1.0, 1.0), Err(Error::QuantizationViolation(_))));
        assert!(matches!(dirac_charge(0.5, 0.0, 1.0, 1.0), Err(Error::Domain(_))));
        assert_eq!(dirac_charge(-1.5, 2.0, 1.0, 3.0).unwrap().g(), -2.25);
    }

    #[test]
    fn goldhaber_values() {
        let h = HalfInt::from_twice;
        assert_eq!(goldhaber_term(h(0), 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(goldhaber_term(h(1), 1.0, 1.0, 1.0).unwrap(), 0.125);
        let a = goldhaber_term(h(1), 1.0, 1.0, 2.0).unwrap();
        let b = goldhaber_term(h(2), 1.0, 1.0, 2.0).unwrap();
        assert_eq!(b, 4.0 * a);
        assert!(goldhaber_term(h(1), 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn pointwise_values() {
        assert_eq!(vortex_potential(1.0, 1.0, 0.0).unwrap(), [0.0, -1.0]);
        let a = vortex_potential(2.0, 0.3, -1.1).unwrap();
        let r = (0.3f64 * 0.3 + 1.1 * 1.1).sqrt();
        assert!((a[0].hypot(a[1]) - 2.0 / r).abs() < 1e-15);
        assert!(vortex_potential(1.0, 0.0, 0.0).is_err());
        assert_eq!(dirac_potential(1.0, 2.0, 0.7, 0.0).unwrap(), [0.0, -0.0, 0.0]);
        assert!(dirac_potential(1.0, 1.0, 0.0, PI).is_err());
        let y = yang_potentials([0.0, 2.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(y[0], [0.0, 0.0, 0.0, 0.0, 0.5]);
        assert!(yang_potentials([-1.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn spherical_and_cartesian_dirac_agree() {
        let (r, alpha, beta): (f64, f64, f64) = (1.7, 2.2, 0.9);
        let x = [r * beta.sin() * alpha.cos(), r * beta.sin() * alpha.sin(), r * beta.cos()];
        let a = dirac_potential(0.5, r, alpha, beta).unwrap();
        let b = dirac_potential_cartesian(0.5, x).unwrap();
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn circulation_examples() {
        let v = circulation(&GaugeField::Vortex { g: 1.0 }, &Circle::planar(1.0)).unwrap();
        assert!((v + TAU).abs() < 1e-8);
        let d = circulation(&GaugeField::Dirac { g: 1.0 }, &Circle::latitude(1.0, PI / 2.0)).unwrap();
        assert!((d + TAU).abs() < 1e-8);
        let small = circulation(&GaugeField::Dirac { g: 1.0 }, &Circle::latitude(1.0, 1e-4)).unwrap();
        assert!(small.abs() < 1e-7);
        assert!(circulation(&GaugeField::Dirac { g: 1.0 }, &Circle::latitude(1.0, PI)).is_err());
    }
}
