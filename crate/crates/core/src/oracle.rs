//! Brute-force eigenvalue oracle for the radial and polar-angle equations.
//!
//! The radial operator `-(ħ²/2μ)(R'' + (d-1)/u R' - Λ/u² R) + V R` is
//! discretized by finite volumes on a graded grid after factoring out the
//! regular leading power `u^ℓ`; the resulting symmetric tridiagonal matrix
//! is diagonalized by Sturm-sequence bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::HalfInt;
use crate::spectra::{PhysicalParams, PowerTerm, QuantumNumbers, SystemId};
use crate::wavefun::ClosedFormOde;

/// Potential in the radial equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Potential {
    /// `μω²u²/2`.
    Harmonic { omega: f64 },
    /// `-e²/r`.
    Coulomb { e2: f64 },
    /// `-e²/r + ħ²s²/(2μr²)`.
    CoulombGoldhaber { e2: f64, s: HalfInt },
    /// `C0 + C2 u² + C4 u⁴ + …`; `higher` holds `C4, C6, …`.
    Modified { c0: f64, c2: f64, higher: Vec<f64> },
    /// Arbitrary `Σ coef · u^power`.
    Terms(Vec<PowerTerm>),
}

/// One radial eigenproblem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    /// `d` in the `(d-1)/u` first-derivative coefficient.
    pub dim_eff: f64,
    /// `Λ` of the `-Λ/u²` term.
    pub angular_coeff: f64,
    pub potential: Potential,
    pub mu: f64,
    pub hbar: f64,
    pub r_max: f64,
    pub grid_points: usize,
    /// Leading power `ℓ` of the wanted solutions, `R ~ u^ℓ`. Defaults to the
    /// larger root of `ℓ(ℓ + d - 2) = Λ_total`; set it to pick the other
    /// branch when both are square-integrable.
    pub leading_power: Option<f64>,
}

/// Discretization actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub points: usize,
    pub domain_end: f64,
    /// Faces sit at `r_max (i/n)^grading`.
    pub grading: f64,
    pub leading_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    /// `(4/3)|λ(n) - λ(2n)|` per eigenvalue.
    pub est_error: Vec<f64>,
    pub grid: GridInfo,
}

const GRADING: f64 = 1.5;
const MIN_POINTS: usize = 100;

impl Potential {
    /// Power-law terms in units of energy.
    fn terms(&self, mu: f64, hbar: f64) -> Vec<PowerTerm> {
        let kinetic = hbar * hbar / (2.0 * mu);
        match self {
            Potential::Harmonic { omega } => vec![PowerTerm { coef: 0.5 * mu * omega * omega, power: 2.0 }],
            Potential::Coulomb { e2 } => vec![PowerTerm { coef: -e2, power: -1.0 }],
            Potential::CoulombGoldhaber { e2, s } => vec![
                PowerTerm { coef: -e2, power: -1.0 },
                PowerTerm { coef: kinetic * s.value() * s.value(), power: -2.0 },
            ],
            Potential::Modified { c0, c2, higher } => {
                let mut t = vec![PowerTerm { coef: *c0, power: 0.0 }, PowerTerm { coef: *c2, power: 2.0 }];
                t.extend(higher.iter().enumerate().map(|(i, &c)| PowerTerm { coef: c, power: 2.0 * i as f64 + 4.0 }));
                t
            }
            Potential::Terms(t) => t.clone(),
        }
    }
}

impl RadialProblem {
    fn kinetic(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mu)
    }

    /// Potential terms with every `1/u²` piece moved into the centrifugal
    /// coefficient.
    fn split_terms(&self) -> (Vec<PowerTerm>, f64) {
        let kinetic = self.kinetic();
        let mut lambda = self.angular_coeff;
        let mut rest = Vec::new();
        for t in self.potential.terms(self.mu, self.hbar) {
            if t.power == -2.0 {
                lambda += t.coef / kinetic;
            } else {
                rest.push(t);
            }
        }
        (rest, lambda)
    }

    fn root_power(&self, lambda: f64) -> Result<f64> {
        let p = self.dim_eff - 1.0;
        let disc = (p - 1.0) * (p - 1.0) + 4.0 * lambda;
        if disc < 0.0 {
            return Err(Error::Domain(format!("Λ = {lambda} is below the fall-to-centre bound")));
        }
        Ok((-(p - 1.0) + disc.sqrt()) / 2.0)
    }

    fn validate(&self) -> Result<()> {
        if self.grid_points < MIN_POINTS {
            return Err(Error::GridTooCoarse(self.grid_points));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::Domain(format!("r_max must be positive, got {}", self.r_max)));
        }
        if !(self.mu > 0.0 && self.hbar > 0.0) {
            return Err(Error::Domain("mu and hbar must be positive".into()));
        }
        if !self.dim_eff.is_finite() || !self.angular_coeff.is_finite() {
            return Err(Error::Domain("non-finite dimension or angular coefficient".into()));
        }
        Ok(())
    }

    /// Domain end covering the lowest `k` states with margin.
    pub fn suggested_r_max(&self, k: usize) -> Result<f64> {
        let (_, lambda) = self.split_terms();
        let ell = match self.leading_power {
            Some(l) => l,
            None => self.root_power(lambda)?,
        };
        let kf = k as f64;
        let harmonic = |omega: f64| 6.0 * (self.hbar * (2.0 * kf + ell + self.dim_eff) / (self.mu * omega)).sqrt();
        match &self.potential {
            Potential::Harmonic { omega } => Ok(harmonic(*omega)),
            Potential::Modified { c2, .. } => Ok(harmonic((2.0 * c2 / self.mu).sqrt())),
            Potential::Coulomb { e2 } | Potential::CoulombGoldhaber { e2, .. } => {
                let bohr = self.hbar * self.hbar / (self.mu * e2);
                let q = (kf - 1.0) + ell + (self.dim_eff - 1.0) / 2.0;
                Ok(bohr * q * (2.0 * q + 18.0))
            }
            Potential::Terms(_) => {
                Err(Error::InvalidParameter("no default extent for a custom potential".into()))
            }
        }
    }
}

/// `∫_a^b u^e du`.
fn power_integral(a: f64, b: f64, e: f64) -> Result<f64> {
    if (e + 1.0).abs() < 1e-12 {
        if a == 0.0 {
            return Err(Error::Singular("logarithmic divergence at the origin".into()));
        }
        return Ok((b / a).ln());
    }
    if e + 1.0 < 0.0 && a == 0.0 {
        return Err(Error::Singular(format!("u^{e} is not integrable at the origin")));
    }
    Ok((b.powf(e + 1.0) - a.powf(e + 1.0)) / (e + 1.0))
}

/// Symmetric tridiagonal matrix: `diag` and the `n-1` off-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues below `x` (LDLᵀ inertia).
    #[must_use]
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let pivot = if q == 0.0 { f64::EPSILON * (self.off[i - 1].abs() + 1e-300) } else { q };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / pivot;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k` lowest eigenvalues, ascending.
    pub fn lowest(&self, k: usize) -> Result<Vec<f64>> {
        let (lo, hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        let mut out = Vec::with_capacity(k);
        for index in 0..k {
            let (mut a, mut b) = (lo, hi);
            let mut converged = false;
            for _ in 0..300 {
                let mid = 0.5 * (a + b);
                if self.count_below(mid) > index {
                    b = mid;
                } else {
                    a = mid;
                }
                if b - a <= 4.0 * f64::EPSILON * (a.abs().max(b.abs())) + 1e-300 * scale {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Bisection { index });
            }
            out.push(0.5 * (a + b));
        }
        if out.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Bisection { index: k });
        }
        Ok(out)
    }
}

/// Finite-volume matrix for `n` cells, in units of energy.
fn radial_matrix(problem: &RadialProblem, n: usize, ell: f64, terms: &[PowerTerm], lambda: f64) -> Result<Tridiagonal> {
    let kinetic = problem.kinetic();
    let p = problem.dim_eff - 1.0;
    let weight = p + 2.0 * ell;
    let leftover = lambda - ell * (ell + p - 1.0);
    let faces: Vec<f64> = (0..=n).map(|i| problem.r_max * (i as f64 / n as f64).powf(GRADING)).collect();
    let centres: Vec<f64> = faces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();

    let mut mass = Vec::with_capacity(n);
    let mut diag = vec![0.0; n];
    for i in 0..n {
        let (a, b) = (faces[i], faces[i + 1]);
        mass.push(power_integral(a, b, weight)?);
        for t in terms {
            diag[i] += t.coef * power_integral(a, b, weight + t.power)?;
        }
        if leftover.abs() > 1e-14 {
            diag[i] += kinetic * leftover * power_integral(a, b, weight - 2.0)?;
        }
    }
    let mut off = Vec::with_capacity(n - 1);
    for i in 1..n {
        let flux = kinetic * faces[i].powf(weight) / (centres[i] - centres[i - 1]);
        diag[i - 1] += flux;
        diag[i] += flux;
        off.push(-flux);
    }
    // Dirichlet at r_max, zero flux at the origin
    diag[n - 1] += kinetic * faces[n].powf(weight) / (faces[n] - centres[n - 1]);

    for i in 0..n {
        diag[i] /= mass[i];
    }
    for i in 0..n - 1 {
        off[i] /= (mass[i] * mass[i + 1]).sqrt();
    }
    Ok(Tridiagonal { diag, off })
}

/// Lowest `k` eigenvalues of a radial problem, with a Richardson error
/// estimate from a second solve on twice as many cells.
pub fn solve_radial(problem: &RadialProblem, k: usize) -> Result<EigenResult> {
    problem.validate()?;
    if k == 0 || k > problem.grid_points / 10 {
        return Err(Error::TooManyEigenvalues { k, points: problem.grid_points });
    }
    let (terms, lambda) = problem.split_terms();
    let ell = match problem.leading_power {
        Some(l) => l,
        None => problem.root_power(lambda)?,
    };
    if 2.0 * ell + problem.dim_eff - 1.0 <= -1.0 {
        return Err(Error::Domain(format!("leading power {ell} is not square-integrable")));
    }
    let n = problem.grid_points;
    let coarse = radial_matrix(problem, n, ell, &terms, lambda)?.lowest(k)?;
    let fine = radial_matrix(problem, 2 * n, ell, &terms, lambda)?.lowest(k)?;
    let est_error = coarse.iter().zip(&fine).map(|(a, b)| 4.0 / 3.0 * (a - b).abs()).collect();
    Ok(EigenResult {
        eigenvalues: coarse,
        est_error,
        grid: GridInfo { points: n, domain_end: problem.r_max, grading: GRADING, leading_power: ell },
    })
}

fn theta_matrix(l: f64, j: f64, n: usize) -> Tridiagonal {
    let h = std::f64::consts::PI / (n + 1) as f64;
    let diag = (1..=n)
        .map(|i| {
            let t = h * i as f64;
            let (s, c) = (t / 2.0).sin_cos();
            let (one_minus, one_plus) = (2.0 * s * s, 2.0 * c * c);
            let cot = t.cos() / t.sin();
            2.0 / (h * h) + 2.0 * l * (l + 1.0) / one_minus + 2.0 * j * (j + 1.0) / one_plus
                + 0.75 * cot * cot
                - 1.5
        })
        .collect();
    Tridiagonal { diag, off: vec![-1.0 / (h * h); n - 1] }
}

/// Lowest `k` eigenvalues `λ(λ+3)` of the polar-angle equation at fixed
/// `L`, `J`, on a uniform grid of `grid_points` interior nodes.
pub fn solve_angular_theta(l: HalfInt, j: HalfInt, k: usize, grid_points: usize) -> Result<EigenResult> {
    if l.twice() < 0 || j.twice() < 0 {
        return Err(Error::InvalidQuantumNumbers(format!("L = {l}, J = {j} must be nonnegative")));
    }
    if grid_points < MIN_POINTS {
        return Err(Error::GridTooCoarse(grid_points));
    }
    if k == 0 || k > grid_points / 10 {
        return Err(Error::TooManyEigenvalues { k, points: grid_points });
    }
    let coarse = theta_matrix(l.value(), j.value(), grid_points).lowest(k)?;
    let fine = theta_matrix(l.value(), j.value(), 2 * grid_points).lowest(k)?;
    let est_error = coarse.iter().zip(&fine).map(|(a, b)| 4.0 / 3.0 * (a - b).abs()).collect();
    Ok(EigenResult {
        eigenvalues: coarse,
        est_error,
        grid: GridInfo { points: grid_points, domain_end: std::f64::consts::PI, grading: 1.0, leading_power: 0.0 },
    })
}

/// Radial problem of `system` in the angular sector of `qn` (radial
/// numbers in `qn` are ignored), together with the closed-form energies of
/// its `k` lowest states.
pub fn system_problem(
    system: &SystemId,
    qn: &QuantumNumbers,
    params: &PhysicalParams,
    grid_points: usize,
    k: usize,
) -> Result<(RadialProblem, Vec<f64>)> {
    qn.validate(system)?;
    let (mu, hbar) = (params.mu, params.hbar);
    let ladder = |first: f64, step: f64| (0..k).map(move |i| first + step * i as f64);
    let coulomb = |q0: f64| -> Result<Vec<f64>> {
        let e2 = params.coupling()?;
        Ok(ladder(q0, 1.0).map(|q| -mu * e2 * e2 / (2.0 * hbar * hbar * q * q)).collect())
    };
    let (dim, lambda, potential, leading, expected) = match (*system, *qn) {
        (SystemId::Osc { dim }, _) => {
            let ell = match *qn {
                QuantumNumbers::Osc1 { n } => f64::from(n % 2),
                QuantumNumbers::Osc2 { m, .. } => f64::from(m.abs()),
                QuantumNumbers::Osc4 { j, .. } => 2.0 * j.value(),
                QuantumNumbers::Osc8 { n_theta, j, l, .. } => 2.0 * (f64::from(n_theta) + (j + l).value()),
                _ => return Err(Error::UnsupportedDimension(dim)),
            };
            let omega = params.omega()?;
            let d = dim as f64;
            let hw = hbar * omega;
            let expected = ladder(hw * (ell + d / 2.0), 2.0 * hw).collect();
            (d, ell * (ell + d - 2.0), Potential::Harmonic { omega }, Some(ell), expected)
        }
        (SystemId::Anyon1 { nu }, _) => {
            let e2 = params.coupling()?;
            (1.0, nu * (nu - 1.0), Potential::Coulomb { e2 }, Some(nu), coulomb(nu)?)
        }
        (SystemId::Dyon2 { .. }, QuantumNumbers::Dyon2 { m, s, .. }) => {
            let ms = f64::from(m) + s.value();
            let e2 = params.coupling()?;
            (2.0, ms * ms, Potential::Coulomb { e2 }, None, coulomb(ms.abs() + 0.5)?)
        }
        (SystemId::Dyon3 { .. }, QuantumNumbers::Dyon3 { j, s, .. }) => {
            let (jv, sv) = (j.value(), s.value());
            let e2 = params.coupling()?;
            (3.0, jv * (jv + 1.0) - sv * sv, Potential::CoulombGoldhaber { e2, s }, None, coulomb(jv + 1.0)?)
        }
        (SystemId::Ycm5 { .. }, QuantumNumbers::Ycm5 { n_theta, j, l, .. }) => {
            let lam = f64::from(n_theta) + (j + l).value();
            let e2 = params.coupling()?;
            (5.0, lam * (lam + 3.0), Potential::Coulomb { e2 }, None, coulomb(lam + 2.0)?)
        }
        _ => return Err(Error::InvalidQuantumNumbers(format!("{qn:?} for {system}"))),
    };
    let mut problem = RadialProblem {
        dim_eff: dim,
        angular_coeff: lambda,
        potential,
        mu,
        hbar,
        r_max: 1.0,
        grid_points,
        leading_power: leading,
    };
    problem.r_max = problem.suggested_r_max(k)?;
    Ok((problem, expected))
}

/// Nonnegative `λ` with `λ(λ+3) = eigenvalue`.
#[must_use]
pub fn lambda_from_eigenvalue(eigenvalue: f64) -> f64 {
    (-3.0 + (9.0 + 4.0 * eigenvalue).sqrt()) / 2.0
}

/// Residual of sampled data on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledResidual {
    /// Centred differences with the grid step.
    pub fine: f64,
    /// Centred differences with twice the grid step.
    pub coarse: f64,
}

impl SampledResidual {
    #[must_use]
    pub fn refinement_ratio(&self) -> f64 {
        self.coarse / self.fine
    }
}

/// Normalized residual of `ode` applied to `samples` on the uniform `grid`,
/// using centred differences at steps `h` and `2h` and skipping two points
/// at each end.
pub fn residual(ode: &dyn ClosedFormOde, grid: &[f64], samples: &[f64]) -> Result<SampledResidual> {
    if grid.len() != samples.len() {
        return Err(Error::InvalidParameter("grid and samples differ in length".into()));
    }
    if grid.len() < 54 {
        return Err(Error::GridTooCoarse(grid.len()));
    }
    let h = grid[1] - grid[0];
    if grid.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs()) {
        return Err(Error::InvalidParameter("grid is not uniform".into()));
    }
    let (mut fine, mut coarse, mut scale) = (0.0f64, 0.0f64, 0.0f64);
    for i in 2..grid.len() - 2 {
        let t = grid[i];
        for (step, slot) in [(1usize, &mut fine), (2, &mut coarse)] {
            let (fm, f0, fp) = (samples[i - step], samples[i], samples[i + step]);
            let hs = h * step as f64;
            let terms = ode.terms(t, [f0, (fp - fm) / (2.0 * hs), (fp - 2.0 * f0 + fm) / (hs * hs)]);
            *slot = slot.max(terms.iter().sum::<f64>().abs());
            if step == 1 {
                scale = scale.max(terms.iter().map(|x| x.abs()).sum());
            }
        }
    }
    if scale == 0.0 {
        return Ok(SampledResidual { fine: 0.0, coarse: 0.0 });
    }
    Ok(SampledResidual { fine: fine / scale, coarse: coarse / scale })
}
