//! Command-line arguments and their validated form.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use arcopuc::params_lattice::PiMultiple;
use arcopuc::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "arcopuc", version, about = "Fourier extension and arc orthogonal polynomial experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate the constrained equilibrium measure: phi, rho, I, L.
    Eqm(EqmArgs),
    /// Compare p_M from the recursion with its large-M asymptotics.
    Compare(CompareArgs),
    /// Solve for the critical density and compare with pi/(pi - alpha).
    Conjecture(ConjectureArgs),
    /// Least-squares Fourier extension of sampled data.
    Project(ProjectArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Output file; written atomically. Standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct EqmArgs {
    /// Extension period `p/q` (sets alpha = pi/b).
    #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
    pub b: Option<Rational>,
    /// Arc half-angle as a rational multiple of pi, e.g. `5pi/6`.
    #[arg(long)]
    pub alpha: Option<PiMultiple>,
    /// Constraint density.
    #[arg(long, conflicts_with = "xi_tilde", required_unless_present = "xi_tilde")]
    pub xi: Option<Rational>,
    /// Oversampling ratio N/M; xi = b * xi~.
    #[arg(long = "xi-tilde")]
    pub xi_tilde: Option<Rational>,
    /// `band`, `saturated`, `edge`, `full` or `start:stop:count`.
    #[arg(long, default_value = "full")]
    pub grid: GridSpec,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub b: Rational,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "M")]
    pub m_dim: usize,
    /// `band` (`[0, 0.6 beta]`), `saturated` (middle 60% of `(beta, alpha)`),
    /// `edge`, `full`, `nodes` or `start:stop:count`.
    #[arg(long, default_value = "band")]
    pub grid: GridSpec,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    /// Arc half-angles to test; may be repeated.
    #[arg(long)]
    pub alpha: Vec<PiMultiple>,
    /// Range of alpha values as `start:stop:count`.
    #[arg(long, conflicts_with = "alpha")]
    pub grid: Option<GridSpec>,
    /// Largest accepted |xi_alpha - pi/(pi - alpha)|.
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[arg(long)]
    pub b: Rational,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "M")]
    pub m_dim: usize,
    /// Sample file: one row per lattice point with `re`, `re,im` or `x,re,im`.
    #[arg(long)]
    pub input: PathBuf,
    /// Also write the approximation as JSON to this path.
    #[arg(long)]
    pub approx: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

/// An evaluation grid: a named stretch of the arc or an explicit range.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec {
    Band,
    Saturated,
    Edge,
    Full,
    /// Lattice angles in the saturated region; `compare` only.
    Nodes,
    Range { start: f64, stop: f64, count: usize },
}

pub const NAMED_GRID_COUNT: usize = 41;

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "band" => return Ok(GridSpec::Band),
            "saturated" => return Ok(GridSpec::Saturated),
            "edge" => return Ok(GridSpec::Edge),
            "full" => return Ok(GridSpec::Full),
            "nodes" => return Ok(GridSpec::Nodes),
            _ => {}
        }
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid {s:?} is neither a name nor start:stop:count"));
        }
        let start = parse_angle(parts[0])?;
        let stop = parse_angle(parts[1])?;
        let count = parts[2].parse::<usize>().map_err(|_| format!("bad grid count {:?}", parts[2]))?;
        if count < 2 {
            return Err("grid count must be at least 2".into());
        }
        Ok(GridSpec::Range { start, stop, count })
    }
}

impl GridSpec {
    /// Points of the grid given the named stretches `band = [0, beta]`,
    /// `saturated = [beta, alpha]`. `None` for [`GridSpec::Nodes`], which
    /// needs a lattice.
    pub fn points(&self, beta: f64, alpha: f64) -> Option<Vec<f64>> {
        let (lo, hi, n) = match *self {
            GridSpec::Nodes => return None,
            GridSpec::Band => (0.0, beta, NAMED_GRID_COUNT),
            GridSpec::Saturated => (beta, alpha, NAMED_GRID_COUNT),
            GridSpec::Edge => (alpha - 0.1 * (alpha - beta), alpha, NAMED_GRID_COUNT),
            GridSpec::Full => (0.0, alpha, NAMED_GRID_COUNT),
            GridSpec::Range { start, stop, count } => (start, stop, count),
        };
        Some((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
    }
}

/// Parses `5pi/6`, `-pi/2` or a plain decimal.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let v = if body.contains("pi") {
        PiMultiple::from_str(body).map_err(|e| e.to_string())?.radians()
    } else {
        body.parse::<f64>().map_err(|_| format!("not an angle: {s:?}"))?
    };
    if !v.is_finite() {
        return Err(format!("not an angle: {s:?}"));
    }
    Ok(if neg { -v } else { v })
}

/// `b` for an arc half-angle `(p/q) pi`, i.e. `q/p`.
pub fn period_of(alpha: PiMultiple) -> f64 {
    alpha.0.q as f64 / alpha.0.p as f64
}

pub fn radians(alpha: PiMultiple) -> f64 {
    PI * alpha.0.to_f64()
}
