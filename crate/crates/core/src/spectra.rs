//! Closed-form energies, degeneracies and the parameter maps between the
//! fixed-frequency oscillator and the fixed-energy charge–dyon pictures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::HalfInt;

/// Which quantity is held fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Regime {
    /// Oscillator frequency ω.
    Oscillator { omega: f64 },
    /// Oscillator energy E; the dual coupling is `e² = E/4`.
    Dyon { energy: f64 },
    /// Coulomb coupling e² directly.
    DyonCoupling { e2: f64 },
    /// `V = C0 + C2 u² + C4 u⁴ + …` at fixed energy E; `higher` holds
    /// `C4, C6, …`.
    Modified { c0: f64, c2: f64, higher: Vec<f64>, energy: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mu: f64,
    pub hbar: f64,
    pub c: f64,
    pub regime: Regime,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl PhysicalParams {
    /// Units with `μ = ħ = c = 1`.
    #[must_use]
    pub fn natural(regime: Regime) -> Self {
        Self { mu: 1.0, hbar: 1.0, c: 1.0, regime }
    }

    pub fn validate(&self) -> Result<()> {
        positive("mu", self.mu)?;
        positive("hbar", self.hbar)?;
        positive("c", self.c)?;
        match &self.regime {
            Regime::Oscillator { omega } => positive("omega", *omega),
            Regime::Dyon { energy } => positive("E", *energy),
            Regime::DyonCoupling { e2 } => positive("e2", *e2),
            Regime::Modified { c0, c2, higher, energy } => {
                positive("C2", *c2)?;
                if !c0.is_finite() || !energy.is_finite() || higher.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Domain("non-finite potential coefficient".into()));
                }
                positive("E - C0", energy - c0)
            }
        }
    }

    /// Oscillator frequency of the active regime.
    pub fn omega(&self) -> Result<f64> {
        self.validate()?;
        match &self.regime {
            Regime::Oscillator { omega } => Ok(*omega),
            Regime::Modified { c2, .. } => Ok((2.0 * c2 / self.mu).sqrt()),
            other => Err(Error::InvalidParameter(format!("no oscillator frequency in {other:?}"))),
        }
    }

    /// Coulomb coupling e² of the active regime.
    pub fn coupling(&self) -> Result<f64> {
        self.validate()?;
        match &self.regime {
            Regime::Dyon { energy } => Ok(energy / 4.0),
            Regime::DyonCoupling { e2 } => Ok(*e2),
            Regime::Modified { c0, energy, .. } => Ok((energy - c0) / 4.0),
            Regime::Oscillator { .. } => {
                Err(Error::InvalidParameter("oscillator regime carries no coupling".into()))
            }
        }
    }
}

/// One of the eight systems. `None` for `Dyon3`/`Ycm5` means the full
/// tower over the monopole label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SystemId {
    Osc { dim: usize },
    Anyon1 { nu: f64 },
    Dyon2 { s: HalfInt },
    Dyon3 { s: Option<HalfInt> },
    Ycm5 { t: Option<HalfInt> },
}

impl SystemId {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SystemId::Osc { dim: 1 | 2 | 4 | 8 } => Ok(()),
            SystemId::Osc { dim } => Err(Error::UnsupportedDimension(dim)),
            SystemId::Anyon1 { nu } if nu > 0.0 && nu.is_finite() => Ok(()),
            SystemId::Anyon1 { nu } => Err(Error::Domain(format!("nu must be positive, got {nu}"))),
            SystemId::Dyon2 { s } if s == HalfInt::ZERO || s == HalfInt::HALF => Ok(()),
            SystemId::Dyon2 { s } => {
                Err(Error::InvalidQuantumNumbers(format!("2D system needs s in {{0, 1/2}}, got {s}")))
            }
            SystemId::Dyon3 { .. } => Ok(()),
            SystemId::Ycm5 { t: Some(t) } if t.twice() < 0 => {
                Err(Error::InvalidQuantumNumbers(format!("isospin T = {t} is negative")))
            }
            SystemId::Ycm5 { .. } => Ok(()),
        }
    }

    /// Whether the energies are Coulomb-like (negative) rather than
    /// oscillator-like.
    #[must_use]
    pub fn is_dyon(&self) -> bool {
        !matches!(self, SystemId::Osc { .. })
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemId::Osc { dim } => write!(f, "osc{dim}"),
            SystemId::Anyon1 { .. } => write!(f, "anyon1"),
            SystemId::Dyon2 { .. } => write!(f, "dyon2"),
            SystemId::Dyon3 { .. } => write!(f, "dyon3"),
            SystemId::Ycm5 { .. } => write!(f, "ycm5"),
        }
    }
}

/// Bare system name, with default labels (`ν = 1/4`, `s = 0`, full towers).
impl FromStr for SystemId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "osc1" => SystemId::Osc { dim: 1 },
            "osc2" => SystemId::Osc { dim: 2 },
            "osc4" => SystemId::Osc { dim: 4 },
            "osc8" => SystemId::Osc { dim: 8 },
            "anyon1" => SystemId::Anyon1 { nu: 0.25 },
            "dyon2" => SystemId::Dyon2 { s: HalfInt::ZERO },
            "dyon3" => SystemId::Dyon3 { s: None },
            "ycm5" => SystemId::Ycm5 { t: None },
            other => return Err(Error::InvalidParameter(format!("unknown system `{other}`"))),
        })
    }
}

/// Quantum numbers per system. `m` in `Osc2` is the full angular number M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuantumNumbers {
    Osc1 { n: u32 },
    Osc2 { n: u32, m: i32 },
    Osc4 { n: u32, j: HalfInt, m: HalfInt, s: HalfInt },
    Osc8 { n_r: u32, n_theta: u32, j: HalfInt, l: HalfInt, t: HalfInt },
    Anyon1 { n: u32 },
    Dyon2 { n: u32, m: i32, s: HalfInt },
    Dyon3 { n: u32, j: HalfInt, m: HalfInt, s: HalfInt },
    Ycm5 { n_r: u32, n_theta: u32, j: HalfInt, l: HalfInt, t: HalfInt },
}

fn check_projection(j: HalfInt, m: HalfInt, what: &str) -> Result<()> {
    if j.twice() < 0 || m.twice().abs() > j.twice() || (j - m).twice() % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!("{what}: need |{m}| <= {j} with integer difference")));
    }
    Ok(())
}

fn check_coupling(j: HalfInt, l: HalfInt, t: HalfInt) -> Result<()> {
    let (a, b, c) = (j.twice(), l.twice(), t.twice());
    if a < 0 || b < 0 || c < 0 || c < (a - b).abs() || c > a + b || (a + b + c) % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "J = {j}, L = {l}, T = {t} violate the triangle rule"
        )));
    }
    Ok(())
}

impl QuantumNumbers {
    /// Checks internal consistency and compatibility with `system`.
    pub fn validate(&self, system: &SystemId) -> Result<()> {
        system.validate()?;
        let mismatch =
            || Error::InvalidQuantumNumbers(format!("{self:?} do not belong to {system}"));
        match (*self, *system) {
            (QuantumNumbers::Osc1 { .. }, SystemId::Osc { dim: 1 })
            | (QuantumNumbers::Osc2 { .. }, SystemId::Osc { dim: 2 })
            | (QuantumNumbers::Anyon1 { .. }, SystemId::Anyon1 { .. }) => Ok(()),
            (QuantumNumbers::Osc4 { j, m, s, .. }, SystemId::Osc { dim: 4 }) => {
                check_projection(j, m, "m")?;
                check_projection(j, s, "s")
            }
            (QuantumNumbers::Osc8 { j, l, t, .. }, SystemId::Osc { dim: 8 }) => check_coupling(j, l, t),
            (QuantumNumbers::Dyon2 { s, .. }, SystemId::Dyon2 { s: fixed }) => {
                if s == fixed {
                    Ok(())
                } else {
                    Err(mismatch())
                }
            }
            (QuantumNumbers::Dyon3 { j, m, s, .. }, SystemId::Dyon3 { s: fixed }) => {
                if fixed.is_some_and(|f| f != s) {
                    return Err(mismatch());
                }
                check_projection(j, m, "m")?;
                check_projection(j, s, "s")
            }
            (QuantumNumbers::Ycm5 { j, l, t, .. }, SystemId::Ycm5 { t: fixed }) => {
                if fixed.is_some_and(|f| f != t) {
                    return Err(mismatch());
                }
                check_coupling(j, l, t)
            }
            _ => Err(mismatch()),
        }
    }

    /// Oscillator quantum numbers paired with dyon-side ones.
    pub fn dual_oscillator(&self) -> Result<QuantumNumbers> {
        Ok(match *self {
            QuantumNumbers::Dyon2 { n, m, s } => QuantumNumbers::Osc2 { n, m: 2 * m + s.twice() },
            QuantumNumbers::Dyon3 { n, j, m, s } => QuantumNumbers::Osc4 { n, j, m, s },
            QuantumNumbers::Ycm5 { n_r, n_theta, j, l, t } => {
                QuantumNumbers::Osc8 { n_r, n_theta, j, l, t }
            }
            other => {
                return Err(Error::InvalidQuantumNumbers(format!(
                    "{other:?} have no integer oscillator partner"
                )))
            }
        })
    }
}

/// Principal oscillator number `N = 2(n_r + n_θ + J + L)` for 8D labels.
fn eight_dim_principal(n_r: u32, n_theta: u32, j: HalfInt, l: HalfInt) -> f64 {
    2.0 * (f64::from(n_r) + f64::from(n_theta)) + f64::from((j + l).twice())
}

/// Oscillator energy `E = ħω(N + D/2)` in the form printed per dimension.
pub fn osc_energy(dim: usize, qn: &QuantumNumbers, params: &PhysicalParams) -> Result<f64> {
    qn.validate(&SystemId::Osc { dim })?;
    let hw = params.hbar * params.omega()?;
    let level = match *qn {
        QuantumNumbers::Osc1 { n } => f64::from(n) + 0.5,
        QuantumNumbers::Osc2 { n, m } => 2.0 * f64::from(n) + f64::from(m.abs()) + 1.0,
        QuantumNumbers::Osc4 { n, j, .. } => 2.0 * f64::from(n) + 2.0 * j.value() + 2.0,
        QuantumNumbers::Osc8 { n_r, n_theta, j, l, .. } => {
            eight_dim_principal(n_r, n_theta, j, l) + 4.0
        }
        _ => unreachable!("validated"),
    };
    Ok(hw * level)
}

/// Principal quantity `q` of `ε = -μ e⁴ / (2ħ² q²)`.
pub fn principal_q(system: &SystemId, qn: &QuantumNumbers) -> Result<f64> {
    qn.validate(system)?;
    Ok(match (*qn, *system) {
        (QuantumNumbers::Anyon1 { n }, SystemId::Anyon1 { nu }) => f64::from(n) + nu,
        (QuantumNumbers::Dyon2 { n, m, s }, _) => {
            f64::from(n) + (f64::from(m) + s.value()).abs() + 0.5
        }
        (QuantumNumbers::Dyon3 { n, j, .. }, _) => f64::from(n) + j.value() + 1.0,
        (QuantumNumbers::Ycm5 { n_r, n_theta, j, l, .. }, _) => {
            eight_dim_principal(n_r, n_theta, j, l) / 2.0 + 2.0
        }
        _ => {
            return Err(Error::InvalidQuantumNumbers(format!("{system} is not a Coulomb system")))
        }
    })
}

fn coulomb_energy(mu: f64, hbar: f64, e2: f64, q: f64) -> f64 {
    -mu * e2 * e2 / (2.0 * hbar * hbar * q * q)
}

/// Bound-state energy of a Coulomb-side system.
pub fn dyon_energy(system: &SystemId, qn: &QuantumNumbers, params: &PhysicalParams) -> Result<f64> {
    let q = principal_q(system, qn)?;
    Ok(coulomb_energy(params.mu, params.hbar, params.coupling()?, q))
}

/// Allowed oscillator levels `N` up to `max_principal` for a system, in
/// increasing order.
fn principal_levels(system: &SystemId, max_principal: u32) -> Vec<u32> {
    let parity_from = |twice: i32, min: u32| -> Vec<u32> {
        (min..=max_principal).filter(|n| (i64::from(*n) - i64::from(twice)) % 2 == 0).collect()
    };
    match *system {
        SystemId::Osc { .. } | SystemId::Anyon1 { .. } => (0..=max_principal).collect(),
        SystemId::Dyon2 { s } => parity_from(s.twice(), 0),
        SystemId::Dyon3 { s: Some(s) } => parity_from(s.twice(), s.abs().twice() as u32),
        SystemId::Dyon3 { s: None } | SystemId::Ycm5 { t: None } => (0..=max_principal).collect(),
        SystemId::Ycm5 { t: Some(t) } => parity_from(t.twice(), t.twice() as u32),
    }
}

/// `E = ħω·P`: the factor `P` at oscillator level `N` (or radial number
/// `n` for the anyon).
fn oscillator_factor(system: &SystemId, level: u32) -> f64 {
    let n = f64::from(level);
    match *system {
        SystemId::Osc { dim } => n + dim as f64 / 2.0,
        SystemId::Anyon1 { nu } => 2.0 * n + 2.0 * nu,
        SystemId::Dyon2 { .. } => n + 1.0,
        SystemId::Dyon3 { .. } => n + 2.0,
        SystemId::Ycm5 { .. } => n + 4.0,
    }
}

/// Frequencies `ω = E/(ħP)` at which the oscillator reaches the fixed
/// energy `E`, for the lowest `max_levels` levels. Pairs are
/// `(level, ω)`; the level is `N`, or `n` for the anyon.
pub fn quantized_frequencies(
    system: &SystemId,
    energy: f64,
    hbar: f64,
    max_levels: usize,
) -> Result<Vec<(u32, f64)>> {
    system.validate()?;
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::Domain(format!("fixed energy must be positive, got {energy}")));
    }
    positive("hbar", hbar)?;
    let mut levels = Vec::with_capacity(max_levels);
    let mut top = max_levels as u32;
    while levels.len() < max_levels {
        levels = principal_levels(system, top);
        top = top * 2 + 2;
    }
    levels.truncate(max_levels);
    Ok(levels.into_iter().map(|l| (l, energy / (hbar * oscillator_factor(system, l)))).collect())
}

/// `ε` two ways for one Coulomb-side state at fixed oscillator energy `E`:
/// route (a) is `-μω²/8` with `ω = E/(ħP)` and `P` from the dual
/// oscillator's energy formula, route (b) is [`dyon_energy`] at
/// `e² = E/4`. Returns (a) - (b).
pub fn duality_identity_residual(
    system: &SystemId,
    qn: &QuantumNumbers,
    energy: f64,
    mu: f64,
    hbar: f64,
) -> Result<f64> {
    qn.validate(system)?;
    let unit = PhysicalParams { mu, hbar: 1.0, c: 1.0, regime: Regime::Oscillator { omega: 1.0 } };
    let factor = match (*qn, *system) {
        (QuantumNumbers::Anyon1 { n }, SystemId::Anyon1 { nu }) => {
            let big_n = 2.0 * f64::from(n) + 2.0 * nu - 0.5;
            big_n + 0.5
        }
        (QuantumNumbers::Dyon2 { .. }, _) => osc_energy(2, &qn.dual_oscillator()?, &unit)?,
        (QuantumNumbers::Dyon3 { .. }, _) => osc_energy(4, &qn.dual_oscillator()?, &unit)?,
        (QuantumNumbers::Ycm5 { .. }, _) => osc_energy(8, &qn.dual_oscillator()?, &unit)?,
        _ => return Err(Error::InvalidQuantumNumbers(format!("{system} has no oscillator dual"))),
    };
    let omega = energy / (hbar * factor);
    let via_frequency = -mu * omega * omega / 8.0;
    let params = PhysicalParams { mu, hbar, c: 1.0, regime: Regime::Dyon { energy } };
    Ok(via_frequency - dyon_energy(system, qn, &params)?)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Level degeneracy of the 4D and 8D oscillators.
pub fn osc_degeneracy(dim: usize, level: u32) -> Result<u128> {
    let n = u128::from(level);
    match dim {
        4 => Ok((n + 1) * (n + 2) * (n + 3) / 6),
        8 => Ok(binomial(n + 7, 7)),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Degeneracy of the 5D Yang–Coulomb level `N` at isospin `T`.
pub fn ycm_degeneracy(level: u32, t: HalfInt) -> Result<u128> {
    let n = i64::from(level);
    let t2 = i64::from(t.twice());
    if t2 < 0 || t2 > n || (n - t2) % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!("N = {level} and T = {t} are incompatible")));
    }
    let p = ((n - t2) / 2) as u128;
    let (t2, n) = (t2 as u128, n as u128);
    let numerator = (t2 + 1) * (t2 + 1) * (p + 1) * (p + 2) * ((p + 2) * (p + 3) + t2 * (n + 5));
    debug_assert_eq!(numerator % 12, 0);
    Ok(numerator / 12)
}

/// `(Σ_T g_N^T, C(N+7, 7))`.
pub fn ycm_degeneracy_sum_check(level: u32) -> Result<(u128, u128)> {
    let mut sum = 0u128;
    let mut t2 = level % 2;
    while t2 <= level {
        sum += ycm_degeneracy(level, HalfInt::from_twice(t2 as i32))?;
        t2 += 2;
    }
    Ok((sum, binomial(u128::from(level) + 7, 7)))
}

/// One energy level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLine {
    /// Oscillator level `N` (radial number `n` for the anyon).
    pub principal: u32,
    pub energy: f64,
    pub degeneracy: u128,
}

fn level_degeneracy(system: &SystemId, level: u32) -> Result<u128> {
    let n = i64::from(level);
    Ok(match *system {
        SystemId::Osc { dim: 1 } | SystemId::Anyon1 { .. } => 1,
        SystemId::Osc { dim: 2 } => {
            // pairs (n_r, M) with 2 n_r + |M| = N
            (-n..=n).filter(|m| (n - m.abs()) % 2 == 0).count() as u128
        }
        SystemId::Osc { dim } => osc_degeneracy(dim, level)?,
        SystemId::Dyon2 { s } => {
            // pairs (n_r, m) with 2 n_r + |2m + 2s| = N
            let s2 = i64::from(s.twice());
            (-n..=n).filter(|m| {
                let big_m = (2 * m + s2).abs();
                big_m <= n && (n - big_m) % 2 == 0
            })
            .count() as u128
        }
        SystemId::Dyon3 { s } => {
            // j = N/2 - n_r, each j contributing its m-multiplet, and its
            // s-multiplet too when s ranges freely
            let mut total = 0u128;
            let mut j2 = n;
            while j2 >= 0 {
                let ok = match s {
                    Some(s) => j2 >= i64::from(s.abs().twice()),
                    None => true,
                };
                if ok {
                    let mult = (j2 + 1) as u128;
                    total += if s.is_some() { mult } else { mult * mult };
                }
                j2 -= 2;
            }
            total
        }
        SystemId::Ycm5 { t: Some(t) } => ycm_degeneracy(level, t)?,
        SystemId::Ycm5 { t: None } => ycm_degeneracy_sum_check(level)?.0,
    })
}

/// Levels with principal number up to `max_principal`, sorted by energy.
pub fn enumerate_spectrum(
    system: &SystemId,
    params: &PhysicalParams,
    max_principal: u32,
) -> Result<Vec<SpectrumLine>> {
    system.validate()?;
    params.validate()?;
    let mut lines = Vec::new();
    for level in principal_levels(system, max_principal) {
        let energy = match *system {
            SystemId::Osc { .. } => params.hbar * params.omega()? * oscillator_factor(system, level),
            SystemId::Anyon1 { nu } => {
                coulomb_energy(params.mu, params.hbar, params.coupling()?, f64::from(level) + nu)
            }
            _ => {
                let q = oscillator_factor(system, level) / 2.0;
                coulomb_energy(params.mu, params.hbar, params.coupling()?, q)
            }
        };
        lines.push(SpectrumLine { principal: level, energy, degeneracy: level_degeneracy(system, level)? });
    }
    lines.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(lines)
}

/// Direction of a parameter map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    OscToDyon,
    DyonToOsc,
}

/// A power-law potential term `coef · r^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coef: f64,
    pub power: f64,
}

/// Both sides of the duality. Unset fields are unknown.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DualityParams {
    pub mu: f64,
    pub energy: Option<f64>,
    pub omega: Option<f64>,
    pub c0: Option<f64>,
    pub c2: Option<f64>,
    /// `C4, C6, …` of an oscillator-like potential.
    pub higher: Vec<f64>,
    pub e2: Option<f64>,
    pub eps: Option<f64>,
    /// Extra Coulomb-side potential produced by `higher`.
    pub residual: Vec<PowerTerm>,
}

impl DualityParams {
    #[must_use]
    pub fn from_physical(params: &PhysicalParams) -> Self {
        let mut d = DualityParams { mu: params.mu, ..Default::default() };
        match &params.regime {
            Regime::Oscillator { omega } => d.omega = Some(*omega),
            Regime::Dyon { energy } => d.energy = Some(*energy),
            Regime::DyonCoupling { e2 } => d.e2 = Some(*e2),
            Regime::Modified { c0, c2, higher, energy } => {
                d.c0 = Some(*c0);
                d.c2 = Some(*c2);
                d.higher = higher.clone();
                d.energy = Some(*energy);
            }
        }
        d
    }
}

/// Maps parameters across the duality.
///
/// Oscillator to dyon: `ε = -μω²/8` (or `-C2/4`), `e² = (E - C0)/4`, and
/// `C_{2k}` for `k ≥ 2` becomes the term `(C_{2k}/4) r^{k-1}`.
/// Dyon to oscillator inverts the same relations.
pub fn dual_params(input: &DualityParams, direction: Direction) -> Result<DualityParams> {
    positive("mu", input.mu)?;
    let mut out = DualityParams { mu: input.mu, ..Default::default() };
    match direction {
        Direction::OscToDyon => {
            if input.omega.is_some() && input.c2.is_some() {
                return Err(Error::InvalidParameter("give either omega or C2, not both".into()));
            }
            if let Some(omega) = input.omega {
                positive("omega", omega)?;
                out.eps = Some(-input.mu * omega * omega / 8.0);
            }
            if let Some(c2) = input.c2 {
                positive("C2", c2)?;
                out.eps = Some(-c2 / 4.0);
            }
            if let Some(energy) = input.energy {
                let shifted = energy - input.c0.unwrap_or(0.0);
                positive("E - C0", shifted)?;
                out.e2 = Some(shifted / 4.0);
            }
            out.residual = input
                .higher
                .iter()
                .enumerate()
                .map(|(i, &c)| PowerTerm { coef: c / 4.0, power: (i + 1) as f64 })
                .collect();
            if out.eps.is_none() && out.e2.is_none() {
                return Err(Error::InvalidParameter("nothing to map: give omega, C2 or E".into()));
            }
        }
        Direction::DyonToOsc => {
            if let Some(eps) = input.eps {
                if !(eps < 0.0) {
                    return Err(Error::NoBoundState(format!("ε = {eps} is not negative")));
                }
                out.omega = Some((-8.0 * eps / input.mu).sqrt());
                out.c2 = Some(-4.0 * eps);
            }
            if let Some(e2) = input.e2 {
                positive("e2", e2)?;
                out.energy = Some(4.0 * e2 + input.c0.unwrap_or(0.0));
                out.c0 = input.c0;
            }
            out.higher = input
                .residual
                .iter()
                .map(|t| t.coef * 4.0)
                .collect();
            if out.omega.is_none() && out.energy.is_none() {
                return Err(Error::InvalidParameter("nothing to map: give eps or e2".into()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn osc(omega: f64) -> PhysicalParams {
        PhysicalParams::natural(Regime::Oscillator { omega })
    }

    fn coupling(e2: f64) -> PhysicalParams {
        PhysicalParams::natural(Regime::DyonCoupling { e2 })
    }

    const H: fn(i32) -> HalfInt = HalfInt::from_twice;

    #[test]
    fn oscillator_energy_examples() {
        let j0 = QuantumNumbers::Osc4 { n: 0, j: H(0), m: H(0), s: H(0) };
        assert_eq!(osc_energy(4, &j0, &osc(1.0)).unwrap(), 2.0);
        assert_eq!(osc_energy(1, &QuantumNumbers::Osc1 { n: 0 }, &osc(1.0)).unwrap(), 0.5);
        assert_eq!(osc_energy(2, &QuantumNumbers::Osc2 { n: 0, m: 0 }, &osc(1.0)).unwrap(), 1.0);
        assert!(osc_energy(4, &j0, &osc(-1.0)).is_err());
        let bad = QuantumNumbers::Osc4 { n: 0, j: H(1), m: H(3), s: H(1) };
        assert!(osc_energy(4, &bad, &osc(1.0)).is_err());
    }

    #[test]
    fn coulomb_energy_examples() {
        let any = SystemId::Anyon1 { nu: 0.25 };
        let e = dyon_energy(&any, &QuantumNumbers::Anyon1 { n: 0 }, &coupling(1.0)).unwrap();
        assert_eq!(e, -8.0);
        let d2 = SystemId::Dyon2 { s: H(0) };
        let qn = QuantumNumbers::Dyon2 { n: 0, m: 0, s: H(0) };
        assert_eq!(dyon_energy(&d2, &qn, &coupling(1.0)).unwrap(), -2.0);
        let y = SystemId::Ycm5 { t: None };
        let qn = QuantumNumbers::Ycm5 { n_r: 0, n_theta: 0, j: H(0), l: H(0), t: H(0) };
        assert_eq!(dyon_energy(&y, &qn, &coupling(1.0)).unwrap(), -0.125);
    }

    #[test]
    fn quantized_frequency_examples() {
        let w = quantized_frequencies(&SystemId::Osc { dim: 4 }, 4.0, 1.0, 1).unwrap();
        assert_eq!(w, vec![(0, 2.0)]);
        let w = quantized_frequencies(&SystemId::Anyon1 { nu: 0.25 }, 1.0, 1.0, 1).unwrap();
        assert_eq!(w, vec![(0, 2.0)]);
        let w = quantized_frequencies(&SystemId::Osc { dim: 8 }, 8.0, 1.0, 3).unwrap();
        assert_eq!(w[0], (0, 2.0));
        assert_eq!(w.len(), 3);
        assert!(quantized_frequencies(&SystemId::Osc { dim: 4 }, 0.0, 1.0, 1).is_err());
        let w = quantized_frequencies(&SystemId::Ycm5 { t: Some(H(2)) }, 1.0, 1.0, 2).unwrap();
        assert_eq!(w.iter().map(|p| p.0).collect::<Vec<_>>(), vec![2, 4]);
    }

    #[test]
    fn duality_residual_examples() {
        let d3 = SystemId::Dyon3 { s: Some(H(0)) };
        let qn = QuantumNumbers::Dyon3 { n: 0, j: H(0), m: H(0), s: H(0) };
        assert_eq!(duality_identity_residual(&d3, &qn, 4.0, 1.0, 1.0).unwrap(), 0.0);
        let any = SystemId::Anyon1 { nu: 0.75 };
        let r = duality_identity_residual(&any, &QuantumNumbers::Anyon1 { n: 2 }, 1.0, 1.0, 1.0);
        assert!(r.unwrap().abs() < 1e-15);
        let y = SystemId::Ycm5 { t: None };
        let qn = QuantumNumbers::Ycm5 { n_r: 1, n_theta: 1, j: H(1), l: H(1), t: H(0) };
        assert!(duality_identity_residual(&y, &qn, 2.0, 1.0, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(osc_degeneracy(4, 2).unwrap(), 10);
        assert_eq!(osc_degeneracy(8, 0).unwrap(), 1);
        assert_eq!(osc_degeneracy(8, 1).unwrap(), 8);
        assert_eq!(osc_degeneracy(8, 2).unwrap(), 36);
        assert!(osc_degeneracy(2, 2).is_err());
        assert_eq!(ycm_degeneracy(2, H(0)).unwrap(), 6);
        assert_eq!(ycm_degeneracy(2, H(2)).unwrap(), 30);
        assert_eq!(ycm_degeneracy(1, H(1)).unwrap(), 8);
        assert!(ycm_degeneracy(2, H(1)).is_err());
        assert!(ycm_degeneracy(2, H(6)).is_err());
        assert_eq!(ycm_degeneracy_sum_check(2).unwrap(), (36, 36));
        assert_eq!(ycm_degeneracy_sum_check(0).unwrap(), (1, 1));
        assert_eq!(ycm_degeneracy_sum_check(1).unwrap(), (8, 8));
    }

    #[test]
    fn spectrum_examples() {
        let lines = enumerate_spectrum(&SystemId::Osc { dim: 4 }, &osc(1.0), 2).unwrap();
        let e: Vec<_> = lines.iter().map(|l| l.energy).collect();
        let g: Vec<_> = lines.iter().map(|l| l.degeneracy).collect();
        assert_eq!(e, vec![2.0, 3.0, 4.0]);
        assert_eq!(g, vec![1, 4, 10]);
        let lines = enumerate_spectrum(&SystemId::Ycm5 { t: None }, &coupling(1.0), 2).unwrap();
        let e: Vec<_> = lines.iter().map(|l| l.energy).collect();
        assert_eq!(e, vec![-0.125, -0.08, -1.0 / 18.0]);
        assert_eq!(lines[2].degeneracy, 36);
        let d3 = enumerate_spectrum(&SystemId::Dyon3 { s: None }, &coupling(1.0), 3).unwrap();
        let g: Vec<_> = d3.iter().map(|l| l.degeneracy).collect();
        assert_eq!(g, vec![1, 4, 10, 20]);
        let d2 = enumerate_spectrum(&SystemId::Dyon2 { s: H(1) }, &coupling(1.0), 5).unwrap();
        let g: Vec<_> = d2.iter().map(|l| (l.principal, l.degeneracy)).collect();
        assert_eq!(g, vec![(1, 2), (3, 4), (5, 6)]);
        assert_eq!(d2[0].energy, -0.5);
    }

    #[test]
    fn anyon_branches_interleave() {
        let p = coupling(1.0);
        let a = enumerate_spectrum(&SystemId::Anyon1 { nu: 0.25 }, &p, 4).unwrap();
        let b = enumerate_spectrum(&SystemId::Anyon1 { nu: 0.75 }, &p, 4).unwrap();
        for k in 0..4 {
            assert!(a[k].energy < b[k].energy);
            assert!(b[k].energy < a[k + 1].energy);
        }
    }

    #[test]
    fn dual_param_examples() {
        let m = |d: DualityParams| dual_params(&d, Direction::OscToDyon).unwrap();
        let r = m(DualityParams { mu: 1.0, energy: Some(4.0), ..Default::default() });
        assert_eq!(r.e2, Some(1.0));
        let r = m(DualityParams { mu: 1.0, omega: Some(2.0), ..Default::default() });
        assert_eq!(r.eps, Some(-0.5));
        let r = m(DualityParams {
            mu: 1.0,
            c0: Some(1.0),
            c2: Some(8.0),
            energy: Some(5.0),
            higher: vec![2.0, 4.0],
            ..Default::default()
        });
        assert_eq!((r.eps, r.e2), (Some(-2.0), Some(1.0)));
        assert_eq!(r.residual, vec![PowerTerm { coef: 0.5, power: 1.0 }, PowerTerm { coef: 1.0, power: 2.0 }]);

        let back = dual_params(&r, Direction::DyonToOsc).unwrap();
        assert_eq!(back.c2, Some(8.0));
        assert_eq!(back.higher, vec![2.0, 4.0]);
        let bad = DualityParams { mu: 1.0, eps: Some(0.5), ..Default::default() };
        assert!(matches!(dual_params(&bad, Direction::DyonToOsc), Err(Error::NoBoundState(_))));
    }
}
