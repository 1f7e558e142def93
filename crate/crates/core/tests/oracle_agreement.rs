//! The finite-volume oracle against the closed-form spectra.

use dyonosc_core::oracle::{lambda_from_eigenvalue, solve_angular_theta, solve_radial, system_problem};
use dyonosc_core::specfun::HalfInt;
use dyonosc_core::spectra::{PhysicalParams, QuantumNumbers, Regime, SystemId};

const H: fn(i32) -> HalfInt = HalfInt::from_twice;

fn check(system: SystemId, qn: QuantumNumbers, params: &PhysicalParams) {
    let (problem, expected) = system_problem(&system, &qn, params, 4000, 5).unwrap();
    let got = solve_radial(&problem, 5).unwrap();
    for (i, (g, e)) in got.eigenvalues.iter().zip(&expected).enumerate() {
        let rel = ((g - e) / e).abs();
        assert!(rel < 1e-3, "{system} {qn:?} level {i}: {g} vs {e}");
        assert!(got.est_error[i].is_finite());
    }
}

#[test]
fn oscillators() {
    let p = PhysicalParams { mu: 0.7, hbar: 1.2, c: 1.0, regime: Regime::Oscillator { omega: 1.9 } };
    check(SystemId::Osc { dim: 1 }, QuantumNumbers::Osc1 { n: 0 }, &p);
    check(SystemId::Osc { dim: 1 }, QuantumNumbers::Osc1 { n: 1 }, &p);
    check(SystemId::Osc { dim: 2 }, QuantumNumbers::Osc2 { n: 0, m: 0 }, &p);
    check(SystemId::Osc { dim: 2 }, QuantumNumbers::Osc2 { n: 0, m: -3 }, &p);
    check(SystemId::Osc { dim: 4 }, QuantumNumbers::Osc4 { n: 0, j: H(0), m: H(0), s: H(0) }, &p);
    check(SystemId::Osc { dim: 4 }, QuantumNumbers::Osc4 { n: 0, j: H(1), m: H(1), s: H(-1) }, &p);
    let qn = QuantumNumbers::Osc8 { n_r: 0, n_theta: 1, j: H(1), l: H(1), t: H(0) };
    check(SystemId::Osc { dim: 8 }, qn, &p);
}

#[test]
fn coulomb_systems() {
    let p = PhysicalParams { mu: 0.7, hbar: 1.2, c: 1.0, regime: Regime::DyonCoupling { e2: 1.6 } };
    for nu in [0.25, 0.75] {
        check(SystemId::Anyon1 { nu }, QuantumNumbers::Anyon1 { n: 0 }, &p);
    }
    for (m, s) in [(0, H(0)), (0, H(1)), (-1, H(1)), (2, H(0))] {
        check(SystemId::Dyon2 { s }, QuantumNumbers::Dyon2 { n: 0, m, s }, &p);
    }
    for (j, s) in [(H(0), H(0)), (H(1), H(1)), (H(2), H(-2)), (H(3), H(1))] {
        check(SystemId::Dyon3 { s: Some(s) }, QuantumNumbers::Dyon3 { n: 0, j, m: j, s }, &p);
    }
    for (n_theta, j, l, t) in [(0, H(0), H(0), H(0)), (0, H(1), H(0), H(1)), (1, H(1), H(1), H(2))] {
        let qn = QuantumNumbers::Ycm5 { n_r: 0, n_theta, j, l, t };
        check(SystemId::Ycm5 { t: Some(t) }, qn, &p);
    }
}

#[test]
fn polar_angle_quantization() {
    for j2 in 0..=2 {
        for l2 in 0..=2 {
            let r = solve_angular_theta(H(l2), H(j2), 5, 4000).unwrap();
            for (n_theta, ev) in r.eigenvalues.iter().enumerate() {
                let want = n_theta as f64 + 0.5 * f64::from(j2 + l2);
                let got = lambda_from_eigenvalue(*ev);
                assert!((got - want).abs() < 1e-3 * want.max(1.0), "J={j2}/2 L={l2}/2: {got} vs {want}");
            }
        }
    }
}
