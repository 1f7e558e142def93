//! Independent oracles for the special-function kernel.

use dyonosc_core::specfun::{
    clebsch_gordan, gauss2f1_terminating, hermite, kummer_derivatives, kummer_terminating,
    log_gamma, wigner_small_d, HalfInt,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Pochhammer-term sum carried out in exact rationals.
fn exact_series(n: i64, b: Option<BigRational>, c: &BigRational, z: &BigRational) -> f64 {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for k in 0..=n {
        sum += &term;
        let kk = rat(k, 1);
        let mut num = (&kk - rat(n, 1)) * z;
        if let Some(b) = &b {
            num *= b + &kk;
        }
        term = term * num / ((c + &kk) * (&kk + rat(1, 1)));
    }
    sum.to_f64().unwrap()
}

#[test]
fn kummer_matches_rational_arithmetic() {
    let exact = exact_series(3, None, &rat(3, 2), &rat(2, 1));
    let got = kummer_terminating(3, 1.5, 2.0).unwrap();
    assert!((got - exact).abs() < 1e-14, "{got} vs {exact}");
    for (n, c, z) in [(5, (7, 2), (13, 4)), (8, (1, 2), (9, 10)), (12, (5, 1), (-3, 2))] {
        let exact = exact_series(n, None, &rat(c.0, c.1), &rat(z.0, z.1));
        let got =
            kummer_terminating(n as u32, c.0 as f64 / c.1 as f64, z.0 as f64 / z.1 as f64).unwrap();
        assert!((got - exact).abs() <= 1e-13 * exact.abs().max(1.0), "n={n}: {got} vs {exact}");
    }
}

#[test]
fn gauss_matches_rational_arithmetic() {
    let exact = exact_series(2, Some(rat(5, 1)), &rat(4, 1), &rat(3, 10));
    let got = gauss2f1_terminating(2, 5.0, 4.0, 0.3).unwrap();
    assert!((got - exact).abs() < 1e-14, "{got} vs {exact}");
    let exact = exact_series(6, Some(rat(17, 2)), &rat(3, 1), &rat(1, 4));
    let got = gauss2f1_terminating(6, 8.5, 3.0, 0.25).unwrap();
    assert!((got - exact).abs() < 1e-13 * exact.abs().max(1.0));
}

/// Coefficients of `d^N/dξ^N e^{-ξ²}` divided by `e^{-ξ²}`, from
/// `p_{k+1} = p_k' - 2ξ p_k`.
fn derivative_polynomial(n: usize) -> Vec<i128> {
    let mut p = vec![1i128];
    for _ in 0..n {
        let mut next = vec![0i128; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            if i > 0 {
                next[i - 1] += c * i as i128;
            }
            next[i + 1] -= 2 * c;
        }
        p = next;
    }
    p
}

fn hermite_exact(n: usize, z: &BigRational) -> f64 {
    let p = derivative_polynomial(n);
    let mut acc = BigRational::zero();
    for &c in p.iter().rev() {
        acc = acc * z + BigRational::from_integer(BigInt::from(c));
    }
    if n % 2 == 1 {
        acc = -acc;
    }
    acc.to_f64().unwrap()
}

#[test]
fn hermite_matches_derivative_definition() {
    let exact = hermite_exact(10, &rat(37, 100));
    let got = hermite(10, 0.37);
    assert!(((got - exact) / exact).abs() < 1e-12, "{got} vs {exact}");
    for n in 0..=20 {
        for (num, den) in [(-29, 10), (1, 3), (5, 2)] {
            let exact = hermite_exact(n, &rat(num, den));
            let got = hermite(n as u32, num as f64 / den as f64);
            assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1.0), "H_{n}");
        }
    }
}

/// Reference values of ln Γ(x) at the exact binary inputs, from a 30-digit
/// evaluation.
const LOG_GAMMA_REFERENCE: [(f64, f64); 9] = [
    (0.1, 2.252712651734206),
    (0.75, 0.20328095143129538),
    (1.0001, -5.771334222047127e-05),
    (1.9, -0.03898427592308336),
    (2.00003, 1.2683820271548697e-05),
    (3.7, 1.428072326665388),
    (10.5, 13.940625219403763),
    (50.25, 145.54187159633213),
    (199.9, 857.4041133643283),
];

#[test]
fn log_gamma_matches_reference_values() {
    for (x, expected) in LOG_GAMMA_REFERENCE {
        let got = log_gamma(x).unwrap();
        assert!(((got - expected) / expected).abs() < 1e-13, "x={x}: {got} vs {expected}");
    }
}

#[test]
fn log_gamma_integer_and_half_integer_points() {
    let mut ln_fact = 0.0f64;
    for n in 1..=150u32 {
        let got = log_gamma(f64::from(n) + 1.0).unwrap();
        ln_fact += f64::from(n).ln();
        assert!((got - ln_fact).abs() <= 1e-13 * ln_fact, "n={n}");
    }
    // Γ(n + 1/2) = (2n)! √π / (4^n n!)
    for n in 1..=60u32 {
        let lf = |k: u32| (1..=k).map(|i| f64::from(i).ln()).sum::<f64>();
        let expected = lf(2 * n) + 0.5 * std::f64::consts::PI.ln()
            - f64::from(n) * 4f64.ln()
            - lf(n);
        let got = log_gamma(f64::from(n) + 0.5).unwrap();
        assert!(((got - expected) / expected).abs() < 1e-13, "n={n}");
    }
}

#[test]
fn clebsch_gordan_known_table_values() {
    let h = HalfInt::from_twice;
    // <1 0; 1 0 | 2 0> = sqrt(2/3), <1 0; 1 0 | 0 0> = -sqrt(1/3)
    let v = clebsch_gordan(h(2), h(0), h(2), h(0), h(4), h(0));
    assert!((v - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
    let v = clebsch_gordan(h(2), h(0), h(2), h(0), h(0), h(0));
    assert!((v + (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
    // <1 1; 1/2 -1/2 | 1/2 1/2> = sqrt(2/3)
    let v = clebsch_gordan(h(2), h(2), h(1), h(-1), h(1), h(1));
    assert!((v - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
    // <3/2 1/2; 1 -1 | 1/2 -1/2> = sqrt(1/6)
    let v = clebsch_gordan(h(3), h(1), h(2), h(-2), h(1), h(-1));
    assert!((v - (1.0f64 / 6.0).sqrt()).abs() < 1e-14);
}

proptest! {
    #[test]
    fn kummer_satisfies_its_ode(n in 0u32..12, c in 0.3f64..8.0, z in -4.0f64..6.0) {
        let [f, d1, d2] = kummer_derivatives(n, c, z).unwrap();
        let nf = f64::from(n);
        let residual = z * d2 + (c - z) * d1 + nf * f;
        let scale = (z * d2).abs() + ((c - z) * d1).abs() + (nf * f).abs();
        prop_assert!(residual.abs() <= 1e-9 * scale.max(1e-300) || scale == 0.0);
    }

    #[test]
    fn wigner_d_transpose_symmetry(j2 in 0i32..8, mi in 0i32..9, si in 0i32..9, beta in 0.0f64..std::f64::consts::PI) {
        let m2 = -j2 + 2 * (mi % (j2 + 1));
        let s2 = -j2 + 2 * (si % (j2 + 1));
        let h = HalfInt::from_twice;
        let a = wigner_small_d(h(j2), h(m2), h(s2), beta).unwrap();
        let b = wigner_small_d(h(j2), h(s2), h(m2), beta).unwrap();
        let sign = if ((m2 - s2) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() < 1e-12);
    }
}
