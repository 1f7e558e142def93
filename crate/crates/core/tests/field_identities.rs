//! Monopole potentials: scaling, loop integrals and the singular-line
//! structure.

use std::f64::consts::{PI, TAU};

use dyonosc_core::fields::{
    circulation, dirac_potential_cartesian, vortex_potential, yang_potentials, Circle, GaugeField,
};
use proptest::prelude::*;

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = a.iter().chain(b).fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

#[test]
fn vortex_circulation_is_radius_independent() {
    let g = 0.8;
    let values: Vec<f64> = [0.5, 1.0, 2.0, 0.01, 300.0]
        .iter()
        .map(|&a| circulation(&GaugeField::Vortex { g }, &Circle::planar(a)).unwrap())
        .collect();
    for v in &values {
        assert!((v + TAU * g).abs() < 1e-8, "{v}");
    }
    let off_centre = Circle { center: vec![0.3, -0.2], e1: vec![1.0, 0.0], e2: vec![0.0, 1.0], radius: 1.0 };
    let v = circulation(&GaugeField::Vortex { g }, &off_centre).unwrap();
    assert!((v + TAU * g).abs() < 1e-8);
    // a loop not enclosing the vortex carries no flux
    let outside = Circle { center: vec![3.0, 0.0], e1: vec![1.0, 0.0], e2: vec![0.0, 1.0], radius: 1.0 };
    assert!(circulation(&GaugeField::Vortex { g }, &outside).unwrap().abs() < 1e-8);
}

#[test]
fn dirac_cap_flux_approaches_the_full_sphere() {
    let g = -1.5;
    let cap = |beta: f64| circulation(&GaugeField::Dirac { g }, &Circle::latitude(1.3, beta)).unwrap();
    for beta in [PI / 6.0, PI / 2.0, 5.0 * PI / 6.0] {
        assert!((cap(beta) + TAU * g * (1.0 - beta.cos())).abs() < 1e-6);
    }
    // quadratic in the distance to the string; Richardson to β = π
    let delta = 1e-2;
    let limit = (4.0 * cap(PI - delta) - cap(PI - 2.0 * delta)) / 3.0;
    assert!((limit + 4.0 * PI * g).abs() < 1e-4, "{limit}");
}

#[test]
fn yang_components_fall_off_like_inverse_radius() {
    // 3-planes through the singular axis: x₀ with two other coordinates
    for component in 0..3 {
        for (p, q) in [(1, 2), (1, 4), (2, 3), (3, 4)] {
            let mut worst = 0.0f64;
            for radius in [1e-3, 0.1, 1.0, 10.0, 1e3] {
                for k in 0..40 {
                    let theta = 0.05 + (PI * 0.8) * f64::from(k) / 40.0;
                    let phi = f64::from(k) * 0.7;
                    let mut x = [0.0; 5];
                    x[0] = radius * theta.cos();
                    x[p] = radius * theta.sin() * phi.cos();
                    x[q] = radius * theta.sin() * phi.sin();
                    let a = yang_potentials(x).unwrap()[component];
                    worst = worst.max(radius * a.iter().map(|v| v * v).sum::<f64>().sqrt());
                }
            }
            assert!(worst < 5.0, "A^{} in plane (0,{p},{q}): r|A| reaches {worst}", component + 1);
        }
    }
}

#[test]
fn singular_sets_are_rejected() {
    assert!(dirac_potential_cartesian(1.0, [0.0, 0.0, -2.0]).is_err());
    assert!(dirac_potential_cartesian(1.0, [0.0, 0.0, 2.0]).is_ok());
    assert!(yang_potentials([-1.0, 1e-7, 0.0, 0.0, 0.0]).is_err());
    assert!(yang_potentials([0.0; 5]).is_err());
    assert!(GaugeField::Yang { component: 4 }.evaluate(&[1.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    assert!(GaugeField::Dirac { g: 1.0 }.evaluate(&[1.0, 0.0]).is_err());
}

fn point<const N: usize>() -> impl Strategy<Value = [f64; N]> {
    prop::array::uniform(-3.0f64..3.0).prop_map(|a: [f64; N]| a)
}

proptest! {
    #[test]
    fn potentials_are_homogeneous_of_degree_minus_one(
        x2 in point::<2>(), x3 in point::<3>(), x5 in point::<5>(), lambda in 0.01f64..100.0
    ) {
        let r2 = x2.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(r2 > 1e-3);
        let a = vortex_potential(1.1, x2[0], x2[1]).unwrap();
        let b = vortex_potential(1.1, lambda * x2[0], lambda * x2[1]).unwrap();
        prop_assert!(close(&b, &a.map(|v| v / lambda), 1e-12));

        let r3 = x3.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(r3 > 1e-3 && r3 + x3[2] > 1e-3 * r3);
        let a = dirac_potential_cartesian(0.5, x3).unwrap();
        let b = dirac_potential_cartesian(0.5, x3.map(|v| lambda * v)).unwrap();
        prop_assert!(close(&b, &a.map(|v| v / lambda), 1e-12));

        let r5 = x5.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(r5 > 1e-3 && r5 + x5[0] > 1e-3 * r5);
        let a = yang_potentials(x5).unwrap();
        let b = yang_potentials(x5.map(|v| lambda * v)).unwrap();
        for i in 0..3 {
            prop_assert!(close(&b[i], &a[i].map(|v| v / lambda), 1e-12));
        }
    }

    #[test]
    fn vortex_and_dirac_are_transverse(x in point::<3>()) {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(r > 1e-3 && r + x[2] > 1e-3 * r);
        let a = dirac_potential_cartesian(2.0, x).unwrap();
        let dot: f64 = a.iter().zip(&x).map(|(p, q)| p * q).sum();
        prop_assert!(dot.abs() <= 1e-14 * a.iter().map(|v| v.abs()).sum::<f64>() * r);
        let v = vortex_potential(2.0, x[0], x[1]).unwrap();
        prop_assert!((v[0] * x[0] + v[1] * x[1]).abs() <= 1e-14 * (v[0].abs() + v[1].abs()) * r);
    }
}
