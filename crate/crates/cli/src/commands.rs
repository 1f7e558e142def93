//! Command implementations: each builds one [`OutputRecord`].

use dyonosc_core::fields::{dirac_charge, GaugeField};
use dyonosc_core::oracle::{solve_radial, system_problem};
use dyonosc_core::specfun::HalfInt;
use dyonosc_core::spectra::{
    dual_params, enumerate_spectrum, quantized_frequencies, Direction, DualityParams,
    PhysicalParams, QuantumNumbers, Regime, SystemId,
};
use dyonosc_core::verify::{self, Suite};
use dyonosc_core::wavefun::{anyon_wavefn, evaluate, Extension};
use dyonosc_core::{Error, Result};
use serde_json::Value;

use crate::output::OutputRecord;
use crate::{
    row, Command, DirectionArg, ExtensionArg, FieldArgs, FieldKind, MapArgs, PhysicsArgs,
    QuantumArgs, SuiteArg, SystemArgs,
};

/// Runs `command`; the flag is set when a verification check failed.
pub fn run(command: &Command, threads: Option<usize>) -> Result<(OutputRecord, bool)> {
    match command {
        Command::Spectrum { system, physics, levels } => Ok((spectrum(system, physics, *levels)?, false)),
        Command::Map(args) => Ok((map(args)?, false)),
        Command::Wavefn { system, physics, qn, grid, fixed, extension } => {
            Ok((wavefn(system, physics, qn, grid.points().collect(), fixed, *extension)?, false))
        }
        Command::Field(args) => Ok((field(args)?, false)),
        Command::SolveRadial { system, physics, qn, k, grid_points } => {
            Ok((solve(system, physics, qn, *k, *grid_points)?, false))
        }
        Command::Verify { suite, seed } => run_verify(*suite, *seed, threads),
    }
}

fn resolve_system(args: &SystemArgs) -> Result<SystemId> {
    let system = match args.system.parse::<SystemId>()? {
        SystemId::Anyon1 { nu } => SystemId::Anyon1 { nu: args.nu.unwrap_or(nu) },
        SystemId::Dyon2 { s } => SystemId::Dyon2 { s: args.s.unwrap_or(s) },
        SystemId::Dyon3 { .. } => SystemId::Dyon3 { s: args.s },
        SystemId::Ycm5 { .. } => SystemId::Ycm5 { t: args.t },
        osc => osc,
    };
    system.validate()?;
    Ok(system)
}

/// Regime from the flags: `--C2` selects the modified oscillator, otherwise
/// exactly one of `--omega`, `--e2`, `--E`; with none, unit frequency or
/// unit coupling.
fn resolve_params(physics: &PhysicsArgs, system: &SystemId) -> Result<PhysicalParams> {
    let PhysicsArgs { mu, hbar, c, omega, energy, e2, c0, c2, higher } = physics.clone();
    let regime = if let Some(c2) = c2 {
        if omega.is_some() || e2.is_some() {
            return Err(Error::InvalidParameter("--C2 excludes --omega and --e2".into()));
        }
        let energy = energy.ok_or_else(|| Error::InvalidParameter("--C2 needs --E".into()))?;
        Regime::Modified { c0: c0.unwrap_or(0.0), c2, higher, energy }
    } else {
        if c0.is_some() || !higher.is_empty() {
            return Err(Error::InvalidParameter("--C0 and --higher need --C2".into()));
        }
        match (omega, e2, energy) {
            (Some(omega), None, None) => Regime::Oscillator { omega },
            (None, Some(e2), None) => Regime::DyonCoupling { e2 },
            (None, None, Some(energy)) => Regime::Dyon { energy },
            (None, None, None) if system.is_dyon() => Regime::DyonCoupling { e2: 1.0 },
            (None, None, None) => Regime::Oscillator { omega: 1.0 },
            _ => return Err(Error::InvalidParameter("give only one of --omega, --e2, --E".into())),
        }
    };
    let params = PhysicalParams { mu, hbar, c, regime };
    params.validate()?;
    Ok(params)
}

fn record_params(rec: &mut OutputRecord, system: &SystemId, params: &PhysicalParams) {
    rec.param("system", system.to_string());
    match *system {
        SystemId::Anyon1 { nu } => rec.param("nu", nu),
        SystemId::Dyon2 { s } => rec.param("s", s.to_string()),
        SystemId::Dyon3 { s: Some(s) } => rec.param("s", s.to_string()),
        SystemId::Ycm5 { t: Some(t) } => rec.param("T", t.to_string()),
        _ => {}
    }
    rec.param("mu", params.mu);
    rec.param("hbar", params.hbar);
    rec.param("c", params.c);
    match &params.regime {
        Regime::Oscillator { omega } => rec.param("omega", *omega),
        Regime::Dyon { energy } => rec.param("E", *energy),
        Regime::DyonCoupling { e2 } => rec.param("e2", *e2),
        Regime::Modified { c0, c2, higher, energy } => {
            rec.param("C0", *c0);
            rec.param("C2", *c2);
            for (i, h) in higher.iter().enumerate() {
                rec.param(&format!("C{}", 2 * i + 4), *h);
            }
            rec.param("E", *energy);
        }
    }
}

fn spectrum(args: &SystemArgs, physics: &PhysicsArgs, levels: usize) -> Result<OutputRecord> {
    let system = resolve_system(args)?;
    let params = resolve_params(physics, &system)?;
    let mut max_principal = levels.max(1) as u32;
    let mut lines = enumerate_spectrum(&system, &params, max_principal)?;
    while lines.len() < levels {
        max_principal *= 2;
        lines = enumerate_spectrum(&system, &params, max_principal)?;
    }
    lines.truncate(levels);
    let mut rec = OutputRecord::new("spectrum");
    record_params(&mut rec, &system, &params);
    rec.param("levels", levels);
    for (index, line) in lines.iter().enumerate() {
        let degeneracy = u64::try_from(line.degeneracy)
            .map_err(|_| Error::InvalidParameter(format!("degeneracy {} overflows", line.degeneracy)))?;
        rec.push(row! {
            "index" => index,
            "principal" => line.principal,
            "energy" => line.energy,
            "degeneracy" => degeneracy,
        });
    }
    Ok(rec)
}

fn map(args: &MapArgs) -> Result<OutputRecord> {
    let direction = match args.direction {
        DirectionArg::Osc2dyon => Direction::OscToDyon,
        DirectionArg::Dyon2osc => Direction::DyonToOsc,
    };
    let input = DualityParams {
        mu: args.mu,
        energy: args.energy,
        omega: args.omega,
        c0: args.c0,
        c2: args.c2,
        higher: args.higher.clone(),
        e2: args.e2,
        eps: args.eps,
        residual: Vec::new(),
    };
    let out = dual_params(&input, direction)?;
    let mut mapped: Vec<(String, f64)> = Vec::new();
    let mut add = |name: &str, v: Option<f64>| {
        if let Some(v) = v {
            mapped.push((name.to_owned(), v));
        }
    };
    add("omega", out.omega);
    add("E", out.energy);
    add("C0", out.c0);
    add("C2", out.c2);
    add("e2", out.e2);
    add("eps", out.eps);
    for (i, h) in out.higher.iter().enumerate() {
        mapped.push((format!("C{}", 2 * i + 4), *h));
    }
    for term in &out.residual {
        mapped.push((format!("residual r^{}", term.power), term.coef));
    }

    let mut rec = OutputRecord::new("map");
    rec.param("direction", if direction == Direction::OscToDyon { "osc2dyon" } else { "dyon2osc" });
    rec.param("mu", args.mu);
    for (name, v) in [
        ("omega", args.omega),
        ("E", args.energy),
        ("C0", args.c0),
        ("C2", args.c2),
        ("e2", args.e2),
        ("eps", args.eps),
    ] {
        if let Some(v) = v {
            rec.param(name, v);
        }
    }
    let Some(levels) = args.levels else {
        for (name, value) in mapped {
            rec.push(row! { "quantity" => name, "value" => value });
        }
        return Ok(rec);
    };

    // paired table: the mapped set moves into params
    for (name, value) in mapped {
        rec.param(&format!("mapped {name}"), value);
    }
    let energy = args.energy.ok_or_else(|| Error::InvalidParameter("--levels needs --E".into()))?;
    let system = resolve_system(&SystemArgs { system: args.system.clone(), nu: args.nu, s: None, t: None })?;
    if !system.is_dyon() {
        return Err(Error::InvalidParameter("--system must name the Coulomb side".into()));
    }
    rec.param("system", system.to_string());
    rec.param("hbar", args.hbar);
    let shifted = energy - args.c0.unwrap_or(0.0);
    let frequencies = quantized_frequencies(&system, shifted, args.hbar, levels)?;
    let coulomb = PhysicalParams {
        mu: args.mu,
        hbar: args.hbar,
        c: 1.0,
        regime: Regime::Dyon { energy: shifted },
    };
    let top = frequencies.last().map_or(0, |f| f.0);
    let lines = enumerate_spectrum(&system, &coulomb, top)?;
    for (level, omega) in frequencies {
        let coulomb_energy = lines.iter().find(|l| l.principal == level).map_or(f64::NAN, |l| l.energy);
        rec.push(row! {
            "level" => level,
            "omega" => omega,
            "eps" => -args.mu * omega * omega / 8.0,
            "coulomb_energy" => coulomb_energy,
        });
    }
    Ok(rec)
}

fn integer(v: HalfInt, name: &str) -> Result<i32> {
    if v.is_integer() {
        Ok(v.twice() / 2)
    } else {
        Err(Error::InvalidQuantumNumbers(format!("{name} = {v} must be an integer")))
    }
}

fn quantum_numbers(system: &SystemId, args: &SystemArgs, qn: &QuantumArgs) -> Result<QuantumNumbers> {
    let zero = HalfInt::ZERO;
    let out = match *system {
        SystemId::Osc { dim: 1 } => QuantumNumbers::Osc1 { n: qn.n },
        SystemId::Osc { dim: 2 } => QuantumNumbers::Osc2 { n: qn.n, m: integer(qn.m.unwrap_or(zero), "M")? },
        SystemId::Osc { dim: 4 } => {
            let j = qn.j.unwrap_or(zero);
            QuantumNumbers::Osc4 { n: qn.n, j, m: qn.m.unwrap_or(j), s: args.s.unwrap_or(j) }
        }
        SystemId::Osc { .. } => {
            let (j, l) = (qn.big_j.unwrap_or(zero), qn.big_l.unwrap_or(zero));
            let t = args.t.unwrap_or((j - l).abs());
            QuantumNumbers::Osc8 { n_r: qn.n_r, n_theta: qn.n_theta, j, l, t }
        }
        SystemId::Anyon1 { .. } => QuantumNumbers::Anyon1 { n: qn.n },
        SystemId::Dyon2 { s } => QuantumNumbers::Dyon2 { n: qn.n, m: integer(qn.m.unwrap_or(zero), "m")?, s },
        SystemId::Dyon3 { s } => {
            let s = s.unwrap_or(zero);
            let j = qn.j.unwrap_or(s.abs());
            QuantumNumbers::Dyon3 { n: qn.n, j, m: qn.m.unwrap_or(j), s }
        }
        SystemId::Ycm5 { t } => {
            let (j, l) = (qn.big_j.unwrap_or(zero), qn.big_l.unwrap_or(zero));
            let t = t.unwrap_or((j - l).abs());
            QuantumNumbers::Ycm5 { n_r: qn.n_r, n_theta: qn.n_theta, j, l, t }
        }
    };
    out.validate(system)?;
    Ok(out)
}

fn record_quantum_numbers(rec: &mut OutputRecord, qn: &QuantumNumbers) {
    let mut put = |k: &str, v: Value| rec.param(k, v);
    match *qn {
        QuantumNumbers::Osc1 { n } | QuantumNumbers::Anyon1 { n } => put("n", n.into()),
        QuantumNumbers::Osc2 { n, m } => {
            put("n", n.into());
            put("M", m.into());
        }
        QuantumNumbers::Dyon2 { n, m, .. } => {
            put("n", n.into());
            put("m", m.into());
        }
        QuantumNumbers::Osc4 { n, j, m, s } | QuantumNumbers::Dyon3 { n, j, m, s } => {
            put("n", n.into());
            put("j", j.to_string().into());
            put("m", m.to_string().into());
            put("s", s.to_string().into());
        }
        QuantumNumbers::Osc8 { n_r, n_theta, j, l, t } | QuantumNumbers::Ycm5 { n_r, n_theta, j, l, t } => {
            put("n_r", n_r.into());
            put("n_theta", n_theta.into());
            put("J", j.to_string().into());
            put("L", l.to_string().into());
            put("T", t.to_string().into());
        }
    }
}

fn coordinate_names(system: &SystemId) -> Result<&'static [&'static str]> {
    Ok(match *system {
        SystemId::Anyon1 { .. } => &["x"],
        SystemId::Osc { dim: 1 } => &["u"],
        SystemId::Osc { dim: 2 } => &["u", "phi"],
        SystemId::Osc { dim: 4 } => &["u", "alpha", "beta", "gamma"],
        SystemId::Osc { dim } => return Err(Error::UnsupportedDimension(dim)),
        SystemId::Dyon2 { .. } => &["r", "phi"],
        SystemId::Dyon3 { .. } => &["r", "alpha", "beta"],
        SystemId::Ycm5 { .. } => &["r", "theta"],
    })
}

fn wavefn(
    args: &SystemArgs,
    physics: &PhysicsArgs,
    qn_args: &QuantumArgs,
    grid: Vec<f64>,
    fixed: &[f64],
    extension: ExtensionArg,
) -> Result<OutputRecord> {
    let system = resolve_system(args)?;
    let params = resolve_params(physics, &system)?;
    let qn = quantum_numbers(&system, args, qn_args)?;
    let names = coordinate_names(&system)?;
    let mut rest = fixed.to_vec();
    if rest.is_empty() {
        rest = vec![0.0; names.len() - 1];
    }
    if rest.len() != names.len() - 1 {
        return Err(Error::InvalidParameter(format!(
            "{system} needs {} fixed coordinates ({}), got {}",
            names.len() - 1,
            names[1..].join(", "),
            rest.len()
        )));
    }
    let mut rec = OutputRecord::new("wavefn");
    record_params(&mut rec, &system, &params);
    record_quantum_numbers(&mut rec, &qn);
    for (name, v) in names[1..].iter().zip(&rest) {
        rec.param(name, *v);
    }
    for first in grid {
        let (re, im) = match (system, qn) {
            (SystemId::Anyon1 { nu }, QuantumNumbers::Anyon1 { n }) => {
                let ext = match extension {
                    ExtensionArg::Half => Extension::HalfLine,
                    ExtensionArg::Even => Extension::Even,
                    ExtensionArg::Odd => Extension::Odd,
                };
                (anyon_wavefn(n, nu, &params, first, ext)?, 0.0)
            }
            _ => {
                let mut point = vec![first];
                point.extend_from_slice(&rest);
                let psi = evaluate(&system, &qn, &params, &point)?;
                (psi.re, psi.im)
            }
        };
        let mut r = serde_json::Map::new();
        r.insert(names[0].to_owned(), first.into());
        r.insert("re".into(), re.into());
        r.insert("im".into(), im.into());
        r.insert("density".into(), (re * re + im * im).into());
        rec.push(r);
    }
    Ok(rec)
}

fn field(args: &FieldArgs) -> Result<OutputRecord> {
    let g = match (args.g, args.s) {
        (Some(g), _) => g,
        (None, Some(s)) => dirac_charge(s, args.e, args.hbar, args.c)?.g(),
        (None, None) => 1.0,
    };
    let components: Vec<GaugeField> = match args.kind {
        FieldKind::Vortex => vec![GaugeField::Vortex { g }],
        FieldKind::Dirac => vec![GaugeField::Dirac { g }],
        FieldKind::Yang => (1..=3).map(|component| GaugeField::Yang { component }).collect(),
    };
    let dim = components[0].dim();
    if args.at.len() != dim {
        return Err(Error::InvalidParameter(format!("--at needs {dim} coordinates, got {}", args.at.len())));
    }
    if args.axis >= dim {
        return Err(Error::InvalidParameter(format!("--axis must be below {dim}")));
    }
    let points: Vec<Vec<f64>> = match args.grid {
        None => vec![args.at.clone()],
        Some(grid) => grid
            .points()
            .map(|v| {
                let mut p = args.at.clone();
                p[args.axis] = v;
                p
            })
            .collect(),
    };
    let mut rec = OutputRecord::new("field");
    rec.param("kind", format!("{:?}", args.kind).to_lowercase());
    if args.kind != FieldKind::Yang {
        rec.param("g", g);
    }
    for point in &points {
        for (index, field) in components.iter().enumerate() {
            let a = field.evaluate(point)?;
            let mut r = serde_json::Map::new();
            for (i, x) in point.iter().enumerate() {
                r.insert(format!("x{i}"), (*x).into());
            }
            r.insert("component".into(), (index + 1).into());
            for (i, v) in a.iter().enumerate() {
                r.insert(format!("A{i}"), (*v).into());
            }
            rec.push(r);
        }
    }
    Ok(rec)
}

fn solve(
    args: &SystemArgs,
    physics: &PhysicsArgs,
    qn_args: &QuantumArgs,
    k: usize,
    grid_points: usize,
) -> Result<OutputRecord> {
    let system = resolve_system(args)?;
    let params = resolve_params(physics, &system)?;
    let qn = quantum_numbers(&system, args, qn_args)?;
    let (problem, expected) = system_problem(&system, &qn, &params, grid_points, k)?;
    let result = solve_radial(&problem, k)?;
    let mut rec = OutputRecord::new("solve-radial");
    record_params(&mut rec, &system, &params);
    record_quantum_numbers(&mut rec, &qn);
    rec.param("k", k);
    rec.param("grid_points", grid_points);
    rec.param("r_max", result.grid.domain_end);
    rec.param("leading_power", result.grid.leading_power);
    for (index, (value, error)) in result.eigenvalues.iter().zip(&result.est_error).enumerate() {
        rec.push(row! {
            "index" => index,
            "eigenvalue" => *value,
            "est_error" => *error,
            "closed_form" => expected[index],
        });
    }
    Ok(rec)
}

fn run_verify(suite: SuiteArg, seed: u64, threads: Option<usize>) -> Result<(OutputRecord, bool)> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::One(s) => vec![s],
    };
    let checks = verify::run(&suites, seed, threads)?;
    let mut rec = OutputRecord::new("verify");
    rec.param("suite", if suite == SuiteArg::All { "all".to_owned() } else { suites[0].to_string() });
    rec.param("seed", seed);
    let failed = checks.iter().any(|c| !c.passed);
    for c in checks {
        rec.push(row! {
            "suite" => c.suite.to_string(),
            "criterion" => c.suite.criterion(),
            "name" => c.name,
            "measured" => c.measured,
            "relation" => if c.relation == verify::Relation::AtMost { "<=" } else { ">=" },
            "tolerance" => c.tolerance,
            "passed" => c.passed,
            "detail" => c.detail,
        });
    }
    rec.param("passed", !failed);
    Ok((rec, failed))
}
