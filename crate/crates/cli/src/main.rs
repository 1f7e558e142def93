//! `dyonosc`: spectra, duality maps, wavefunction and field sampling, the
//! radial eigenvalue oracle and the verification suites.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dyonosc_core::specfun::HalfInt;

use output::Format;

const THREADS_VAR: &str = "DYONOSC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dyonosc", version, about = "Dyon–oscillator duality toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lowest energy levels with degeneracies.
    Spectrum {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        physics: PhysicsArgs,
        #[arg(long, default_value_t = 5)]
        levels: usize,
    },
    /// Maps parameters between the oscillator and Coulomb sides.
    Map(MapArgs),
    /// Samples a normalized wavefunction along its first coordinate.
    Wavefn {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        qn: QuantumArgs,
        /// `start:end:count` for the first coordinate.
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Grid,
        /// Values of the remaining coordinates, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        fixed: Vec<f64>,
        /// Continuation of the anyon solution to x < 0.
        #[arg(long, value_enum, default_value_t = ExtensionArg::Even)]
        extension: ExtensionArg,
    },
    /// Evaluates a monopole vector potential.
    Field(FieldArgs),
    /// Lowest eigenvalues of a radial equation from the finite-volume solver.
    SolveRadial {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        qn: QuantumArgs,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 4000)]
        grid_points: usize,
    },
    /// Runs verification suites; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: SuiteArg,
        #[arg(long, default_value_t = dyonosc_core::verify::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
struct SystemArgs {
    /// osc1, osc2, osc4, osc8, anyon1, dyon2, dyon3 or ycm5.
    #[arg(long)]
    system: String,
    /// Anyon statistics parameter.
    #[arg(long)]
    nu: Option<f64>,
    /// Monopole number (dyon2: 0 or 1/2; dyon3: fixes the tower) or the
    /// fiber number of the 4D oscillator.
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true)]
    s: Option<HalfInt>,
    /// Isospin of the Yang–Coulomb system.
    #[arg(long = "T", value_parser = parse_half)]
    t: Option<HalfInt>,
}

#[derive(Debug, Clone, Args)]
struct PhysicsArgs {
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Fixed oscillator energy.
    #[arg(long = "E", allow_hyphen_values = true)]
    energy: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    e2: Option<f64>,
    #[arg(long = "C0", allow_hyphen_values = true)]
    c0: Option<f64>,
    #[arg(long = "C2", allow_hyphen_values = true)]
    c2: Option<f64>,
    /// `C4, C6, …`, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    higher: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
struct QuantumArgs {
    /// Radial number (osc1: the level N).
    #[arg(long, default_value_t = 0)]
    n: u32,
    /// Magnetic number (osc2: M).
    #[arg(long, value_parser = parse_half, allow_hyphen_values = true)]
    m: Option<HalfInt>,
    #[arg(long, value_parser = parse_half)]
    j: Option<HalfInt>,
    #[arg(long = "n-r", default_value_t = 0)]
    n_r: u32,
    #[arg(long = "n-theta", default_value_t = 0)]
    n_theta: u32,
    #[arg(long = "J", value_parser = parse_half)]
    big_j: Option<HalfInt>,
    #[arg(long = "L", value_parser = parse_half)]
    big_l: Option<HalfInt>,
}

#[derive(Debug, Clone, Args)]
struct MapArgs {
    #[arg(long, value_enum)]
    direction: DirectionArg,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    #[arg(long = "E", allow_hyphen_values = true)]
    energy: Option<f64>,
    #[arg(long = "C0", allow_hyphen_values = true)]
    c0: Option<f64>,
    #[arg(long = "C2", allow_hyphen_values = true)]
    c2: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    higher: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    e2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<f64>,
    /// With --E: the paired (ω_N, ε_N) table for this many levels.
    #[arg(long)]
    levels: Option<usize>,
    /// Coulomb-side system for the table.
    #[arg(long, default_value = "dyon3")]
    system: String,
    #[arg(long)]
    nu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Osc2dyon,
    Dyon2osc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldKind {
    Vortex,
    Dirac,
    Yang,
}

#[derive(Debug, Clone, Args)]
struct FieldArgs {
    #[arg(long, value_enum)]
    kind: FieldKind,
    /// Point, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    at: Vec<f64>,
    /// `start:end:count`, replacing coordinate --axis of --at.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<Grid>,
    #[arg(long, default_value_t = 0)]
    axis: usize,
    /// Magnetic charge; overrides --s.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// Monopole number, giving g = ħcs/e.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    e: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtensionArg {
    Half,
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Grid {
    start: f64,
    end: f64,
    count: usize,
}

impl Grid {
    fn points(self) -> impl Iterator<Item = f64> {
        let Grid { start, end, count } = self;
        (0..count).map(move |i| {
            if count == 1 {
                start
            } else {
                start + (end - start) * i as f64 / (count - 1) as f64
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SuiteArg {
    All,
    One(dyonosc_core::verify::Suite),
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("expected start:end:count, got `{s}`"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let count: usize = n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?;
    if count == 0 {
        return Err("grid needs at least one point".into());
    }
    Ok(Grid { start: num(a)?, end: num(b)?, count })
}

fn parse_half(s: &str) -> Result<HalfInt, String> {
    s.parse().map_err(|e: dyonosc_core::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<SuiteArg, String> {
    if s == "all" {
        return Ok(SuiteArg::All);
    }
    s.parse().map(SuiteArg::One).map_err(|e: dyonosc_core::Error| e.to_string())
}

fn threads() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got `{v}`")),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let threads = match threads() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = threads {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let outcome = commands::run(&cli.command, threads);
    let (record, failed) = match outcome {
        Ok(done) => done,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            record.write(cli.format, &mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            record.write(cli.format, &mut lock).and_then(|()| lock.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
