//! Contracts of the closed-form wavefunctions: governing equations,
//! normalization, oscillator relations and the 4D pullback.

use std::f64::consts::PI;

use dyonosc_core::specfun::HalfInt;
use dyonosc_core::spectra::{PhysicalParams, QuantumNumbers, Regime, SystemId};
use dyonosc_core::transforms::{fiber_angles, forward_map, OscPoint};
use dyonosc_core::wavefun::{
    anyon_via_oscillator, anyon_wavefn, dyon3_wavefn, governing_ode, normalization,
    osc4_wavefn, oscillator_second_moment, residual_report, ycm_angular_z, ClosedFormOde,
    Extension, YcmAngularOde,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const H: fn(i32) -> HalfInt = HalfInt::from_twice;

fn coupling(e2: f64) -> PhysicalParams {
    PhysicalParams { mu: 1.3, hbar: 0.9, c: 1.0, regime: Regime::DyonCoupling { e2 } }
}

fn oscillator(omega: f64) -> PhysicalParams {
    PhysicalParams { mu: 1.3, hbar: 0.9, c: 1.0, regime: Regime::Oscillator { omega } }
}

fn states() -> Vec<(SystemId, QuantumNumbers, PhysicalParams)> {
    let c = coupling(0.7);
    let o = oscillator(1.4);
    vec![
        (SystemId::Anyon1 { nu: 0.25 }, QuantumNumbers::Anyon1 { n: 0 }, c.clone()),
        (SystemId::Anyon1 { nu: 0.75 }, QuantumNumbers::Anyon1 { n: 3 }, c.clone()),
        (SystemId::Dyon2 { s: H(0) }, QuantumNumbers::Dyon2 { n: 2, m: -1, s: H(0) }, c.clone()),
        (SystemId::Dyon2 { s: H(1) }, QuantumNumbers::Dyon2 { n: 1, m: 0, s: H(1) }, c.clone()),
        (SystemId::Dyon3 { s: Some(H(1)) }, QuantumNumbers::Dyon3 { n: 2, j: H(3), m: H(1), s: H(1) }, c.clone()),
        (SystemId::Dyon3 { s: Some(H(0)) }, QuantumNumbers::Dyon3 { n: 0, j: H(2), m: H(-2), s: H(0) }, c.clone()),
        (
            SystemId::Ycm5 { t: Some(H(1)) },
            QuantumNumbers::Ycm5 { n_r: 2, n_theta: 1, j: H(1), l: H(2), t: H(1) },
            c,
        ),
        (SystemId::Osc { dim: 1 }, QuantumNumbers::Osc1 { n: 5 }, o.clone()),
        (SystemId::Osc { dim: 2 }, QuantumNumbers::Osc2 { n: 2, m: -3 }, o.clone()),
        (SystemId::Osc { dim: 4 }, QuantumNumbers::Osc4 { n: 1, j: H(3), m: H(1), s: H(-3) }, o),
    ]
}

#[test]
fn radial_closed_forms_solve_their_equations() {
    for (system, qn, params) in states() {
        let ode = governing_ode(&system, &qn, &params).unwrap();
        let r = residual_report(&ode).unwrap();
        assert!(r.analytic < 1e-8, "{system} {qn:?}: {r:?}");
        let ratio = r.refinement_ratio();
        assert!((3.5..4.5).contains(&ratio), "{system} {qn:?}: ratio {ratio}");
    }
}

#[test]
fn dropping_the_goldhaber_term_breaks_the_equation() {
    let system = SystemId::Dyon3 { s: Some(H(1)) };
    let qn = QuantumNumbers::Dyon3 { n: 1, j: H(1), m: H(1), s: H(1) };
    let mut ode = governing_ode(&system, &qn, &coupling(1.0)).unwrap();
    ode.potential.truncate(1);
    assert!(residual_report(&ode).unwrap().analytic > 1e-3);
}

#[test]
fn angular_factor_solves_its_equation() {
    for n_theta in 0..=2 {
        for j2 in 0..=2 {
            for l2 in 0..=2 {
                let ode = YcmAngularOde { n_theta, j: H(j2), l: H(l2) };
                let r = residual_report(&ode).unwrap();
                assert!(r.analytic < 1e-8, "{ode:?}: {r:?}");
                if r.coarse > 0.0 {
                    assert!((3.5..4.5).contains(&r.refinement_ratio()), "{ode:?}: {r:?}");
                }
            }
        }
    }
    // bounded up to θ = π
    let near_pi = ycm_angular_z(2, H(2), H(2), PI - 1e-9).unwrap();
    assert!(near_pi.is_finite() && near_pi.abs() < 1e3);
}

/// The angular factor with `(1 + cos θ)^L` in place of `(1 + cos θ)^J`,
/// differentiated numerically.
struct SwappedExponent(YcmAngularOde);

impl ClosedFormOde for SwappedExponent {
    fn span(&self) -> (f64, f64) {
        self.0.span()
    }
    fn derivatives(&self, t: f64) -> dyonosc_core::Result<[f64; 3]> {
        let YcmAngularOde { n_theta, j, l } = self.0;
        let f = |t: f64| -> dyonosc_core::Result<f64> {
            let z = ycm_angular_z(n_theta, j, l, t)?;
            Ok(z / (1.0 + t.cos()).powf(j.value()) * (1.0 + t.cos()).powf(l.value()))
        };
        let h = 1e-4;
        let (fm, f0, fp) = (f(t - h)?, f(t)?, f(t + h)?);
        Ok([f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)])
    }
    fn terms(&self, t: f64, d: [f64; 3]) -> Vec<f64> {
        self.0.terms(t, d)
    }
}

#[test]
fn printed_angular_exponent_fails() {
    let ode = YcmAngularOde { n_theta: 1, j: H(2), l: H(0) };
    assert!(residual_report(&ode).unwrap().analytic < 1e-8);
    let swapped = residual_report(&SwappedExponent(ode)).unwrap();
    assert!(swapped.analytic > 1e-2, "{swapped:?}");
}

#[test]
fn wavefunctions_are_normalized() {
    for (system, qn, params) in states() {
        let e = normalization(&system, &qn, &params).unwrap();
        assert!((e.value - 1.0).abs() < 1e-6, "{system} {qn:?}: {e:?}");
    }
}

#[test]
fn anyon_equals_rescaled_oscillator() {
    let p = coupling(0.8);
    for nu in [0.25, 0.75] {
        for n in 0..4 {
            for x in [0.05, 0.4, 1.7, 6.0] {
                let closed = anyon_wavefn(n, nu, &p, x, Extension::HalfLine).unwrap();
                let via = anyon_via_oscillator(n, nu, &p, x).unwrap();
                assert!((closed - via).abs() < 1e-10, "n={n} nu={nu} x={x}: {closed} vs {via}");
            }
        }
    }
}

#[test]
fn oscillator_second_moment_matches_closed_constant() {
    let (mu, hbar) = (1.3, 0.9);
    for nu in [0.25, 0.75] {
        for n in 0..4u32 {
            let level = (2.0 * f64::from(n) + 2.0 * nu - 0.5).round() as u32;
            let omega = 0.6;
            let m = oscillator_second_moment(level, omega, mu, hbar).unwrap();
            let closed = 2.0 * (f64::from(n) + nu) * hbar / (mu * omega);
            assert!((m.value - closed).abs() < 1e-8 * closed, "N={level}");
        }
    }
}

#[test]
fn osc4_pulls_back_to_dyon3() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mu, hbar) = (1.3, 0.9);
    let omega = 0.8;
    for (n, j, m, s) in [(0, H(0), H(0), H(0)), (1, H(1), H(-1), H(1)), (2, H(2), H(2), H(-2))] {
        let energy = hbar * omega * (2.0 * f64::from(n) + 2.0 * j.value() + 2.0);
        let osc = PhysicalParams { mu, hbar, c: 1.0, regime: Regime::Oscillator { omega } };
        let dyon = PhysicalParams { mu, hbar, c: 1.0, regime: Regime::Dyon { energy } };
        let mut ratio: Option<num_complex::Complex64> = None;
        for _ in 0..100 {
            let u: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.2..1.2)).collect();
            let p = OscPoint::new(u).unwrap();
            let fa = fiber_angles(&p).unwrap();
            let radius = p.norm_sq().sqrt();
            let x = forward_map(&p);
            let c = x.coords();
            let r = x.norm();
            let (alpha, beta) = (c[1].atan2(c[0]), (c[2] / r).acos());
            let lhs = osc4_wavefn(n, j, m, s, &osc, radius, fa.alpha, fa.beta, fa.gamma).unwrap();
            let fiber = num_complex::Complex64::from_polar(1.0, s.value() * (fa.alpha + fa.gamma));
            let rhs = dyon3_wavefn(n, j, m, s, &dyon, r, alpha, beta).unwrap() * fiber;
            if rhs.norm() < 1e-8 {
                continue;
            }
            let q = lhs / rhs;
            match ratio {
                None => ratio = Some(q),
                Some(first) => assert!((q - first).norm() < 1e-9 * first.norm(), "{q} vs {first}"),
            }
        }
    }
}
