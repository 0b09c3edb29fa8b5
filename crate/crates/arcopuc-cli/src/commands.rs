//! The four subcommands. Each returns a fully built table so nothing is
//! written before the computation has succeeded.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use arcopuc::asymptotics::AsymContext;
use arcopuc::equilibrium::{xi_critical, EquilibriumData};
use arcopuc::fourext::{discrete_norm_sqr, eval_extension, project};
use arcopuc::opuc::szego_system;
use arcopuc::params_lattice::lattice_nodes;
use arcopuc::study::{compare_on_arc, loglog_fit, ArcGrid};
use arcopuc::{make_params, Error, ExtensionParams, Rational};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{
    period_of, radians, CompareArgs, ConjectureArgs, EqmArgs, GridSpec, ProjectArgs, NAMED_GRID_COUNT,
};
use crate::output::{Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONJECTURE_MISMATCH: i32 = 1;
pub const EXIT_NO_BAND: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;
pub const EXIT_DATA: i32 = 5;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_IO: i32 = 74;

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
    Parse(String),
    Data(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Io(_) => EXIT_IO,
            CliError::Lib(e) => match e {
                Error::NoBand(_) => EXIT_NO_BAND,
                Error::QuadratureFailure(_) | Error::NoRoot(_) | Error::BracketFailure(_) => EXIT_NUMERIC,
                Error::LostOrthogonality { .. }
                | Error::DegreeTooLarge { .. }
                | Error::EnvelopeExceeded(_)
                | Error::FormMismatch(_)
                | Error::DivideByZero => EXIT_PRECISION,
                Error::SampleCountMismatch { .. } => EXIT_DATA,
                Error::Parse(_) => EXIT_PARSE,
                _ => EXIT_USAGE,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(s) | CliError::Parse(s) | CliError::Data(s) | CliError::Io(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

/// A finished table and the exit status to report with it.
pub struct Outcome {
    pub table: Table,
    pub code: i32,
}

pub fn cmd_eqm(a: &EqmArgs) -> Result<Outcome, CliError> {
    let (alpha, b) = match (a.b, a.alpha) {
        (Some(b), _) => (PI / b.to_f64(), b.to_f64()),
        (None, Some(al)) => (radians(al), period_of(al)),
        (None, None) => return Err(CliError::Usage("one of --b or --alpha is required".into())),
    };
    let xi = match (a.xi, a.xi_tilde) {
        (Some(x), _) => x.to_f64(),
        (None, Some(t)) => b * t.to_f64(),
        (None, None) => return Err(CliError::Usage("one of --xi or --xi-tilde is required".into())),
    };
    let eq = EquilibriumData::new(alpha, xi)?;
    let phis = a
        .grid
        .points(eq.beta, eq.alpha)
        .ok_or_else(|| CliError::Usage("the nodes grid needs a lattice; use it with compare".into()))?;
    let rows = phis
        .par_iter()
        .map(|&phi| -> Result<[f64; 4], Error> {
            Ok([phi, eq.density_rho(phi)?, eq.band_mass_i(phi)?, eq.log_transform_l(phi)?])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let max_l = rows.iter().map(|r| r[3]).fold(f64::NEG_INFINITY, f64::max);
    let mut t = Table::new("eqm", &["phi", "rho", "I", "L"]);
    t.meta("alpha", alpha);
    t.meta("xi", xi);
    t.meta("beta", eq.beta);
    t.meta("l", eq.ell);
    t.meta("max_L", max_l);
    t.rows = rows.iter().map(|r| r.iter().map(|&v| Cell::Num(v)).collect()).collect();
    Ok(Outcome { table: t, code: EXIT_OK })
}

fn arc_angles(g: &GridSpec, p: &ExtensionParams, ctx: &AsymContext) -> Vec<f64> {
    if *g == GridSpec::Nodes {
        let (b, a) = (ctx.eq.beta, ctx.eq.alpha);
        return lattice_nodes(p).angles.into_iter().filter(|&t| t > b && t <= a).collect();
    }
    let (grid, count) = arc_grid(g);
    grid.angles(ctx, count)
}

fn arc_grid(g: &GridSpec) -> (ArcGrid, usize) {
    match *g {
        GridSpec::Nodes => unreachable!("handled by arc_angles"),
        GridSpec::Band => (ArcGrid::Band, NAMED_GRID_COUNT),
        GridSpec::Saturated => (ArcGrid::Saturated, NAMED_GRID_COUNT),
        GridSpec::Edge => (ArcGrid::Edge, NAMED_GRID_COUNT),
        GridSpec::Full => (ArcGrid::Full, NAMED_GRID_COUNT),
        GridSpec::Range { start, stop, count } => (ArcGrid::Range { start, stop }, count),
    }
}

fn ext_params(b: Rational, m_dim: usize, n: usize) -> Result<ExtensionParams, CliError> {
    Ok(make_params(b, m_dim, n)?)
}

/// Largest envelope-relative error on the grid for dimension `m_dim`.
fn sweep_point(b: Rational, m_dim: usize, n: usize, grid: &GridSpec) -> Result<f64, Error> {
    let p = make_params(b, m_dim, n)?;
    let sys = szego_system(&p, m_dim)?;
    let ctx = AsymContext::new(&p)?;
    let rows = compare_on_arc(&sys, &ctx, &arc_angles(grid, &p, &ctx), None)?;
    Ok(rows.iter().map(|r| r.envelope_error).fold(0.0, f64::max))
}

pub fn cmd_compare(a: &CompareArgs) -> Result<Outcome, CliError> {
    let p = ext_params(a.b, a.m_dim, a.n)?;
    let sys = szego_system(&p, a.m_dim)?;
    let ctx = AsymContext::new(&p)?;
    let phis = arc_angles(&a.grid, &p, &ctx);
    let rows = compare_on_arc(&sys, &ctx, &phis, None)?;

    let mut dims: Vec<usize> = [0.5, 0.625, 0.75, 0.875, 1.0]
        .iter()
        .map(|f| ((a.m_dim as f64 * f).round() as usize).max(2))
        .filter(|&d| d <= a.m_dim)
        .collect();
    dims.dedup();
    let sweep: Vec<(f64, f64)> = dims
        .par_iter()
        .filter_map(|&d| sweep_point(a.b, d, a.n, &a.grid).ok().map(|e| (d as f64, e)))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = sweep.iter().copied().unzip();
    let slope = loglog_fit(&xs, &ys).map(|f| f.slope).unwrap_or(f64::NAN);

    let mut t = Table::new(
        "compare",
        &["phi", "abs_rec", "abs_asym", "rel_error", "envelope_error", "regime", "flag"],
    );
    t.meta("b", format!("{}/{}", a.b.p, a.b.q));
    t.meta("N", Cell::Int(a.n as i64));
    t.meta("M", Cell::Int(a.m_dim as i64));
    t.meta("xi", p.xi);
    t.meta("alpha", p.alpha);
    t.meta("beta", ctx.eq.beta);
    t.meta("max_rel_error", rows.iter().map(|r| r.rel_error).fold(0.0, f64::max));
    t.meta("max_envelope_error", rows.iter().map(|r| r.envelope_error).fold(0.0, f64::max));
    t.meta("near_zero_rows", Cell::Int(rows.iter().filter(|r| r.near_zero).count() as i64));
    t.meta("slope", slope);
    t.meta(
        "slope_dims",
        xs.iter().map(|d| format!("{d}")).collect::<Vec<_>>().join(" "),
    );
    t.rows = rows
        .iter()
        .map(|r| {
            vec![
                r.phi.into(),
                r.exact.norm().into(),
                r.asym.value.norm().into(),
                r.rel_error.into(),
                r.envelope_error.into(),
                r.regime().to_string().into(),
                if r.near_zero { "near-zero" } else { "" }.into(),
            ]
        })
        .collect();
    Ok(Outcome { table: t, code: EXIT_OK })
}

const DEFAULT_CONJECTURE_ALPHAS: [(f64, f64); 4] = [(1.0, 2.0), (2.0, 3.0), (3.0, 4.0), (5.0, 6.0)];

pub fn cmd_conjecture(a: &ConjectureArgs) -> Result<Outcome, CliError> {
    let alphas: Vec<f64> = match (&a.grid, a.alpha.is_empty()) {
        (Some(g @ GridSpec::Range { .. }), _) => g.points(0.0, 0.0).unwrap_or_default(),
        (Some(_), _) => return Err(CliError::Usage("conjecture expects --grid start:stop:count".into())),
        (None, false) => a.alpha.iter().map(|&al| radians(al)).collect(),
        (None, true) => DEFAULT_CONJECTURE_ALPHAS.iter().map(|(p, q)| PI * p / q).collect(),
    };
    let mut t = Table::new(
        "conjecture",
        &["alpha", "alpha_over_pi", "xi_solved", "conjecture", "difference", "status"],
    );
    let mut worst = 0.0f64;
    let mut mismatch = false;
    for &al in &alphas {
        let conj = PI / (PI - al);
        let (xi, status) = match xi_critical(al) {
            Ok(x) => (x, "ok"),
            Err(Error::NoRoot(_)) => (f64::NAN, "NoRoot"),
            Err(e) => return Err(e.into()),
        };
        let diff = xi - conj;
        if status == "ok" {
            worst = worst.max(diff.abs());
            mismatch |= !(diff.abs() < a.tol);
        }
        t.rows.push(vec![al.into(), (al / PI).into(), xi.into(), conj.into(), diff.into(), status.into()]);
    }
    t.meta("tol", a.tol);
    t.meta("max_difference", worst);
    t.meta("verdict", if mismatch { "mismatch" } else { "consistent" });
    let code = if mismatch { EXIT_CONJECTURE_MISMATCH } else { EXIT_OK };
    Ok(Outcome { table: t, code })
}

/// A parsed sample file: values and, when present, the abscissae.
#[derive(Debug)]
pub struct Samples {
    pub values: Vec<Complex64>,
    pub xs: Vec<Option<f64>>,
}

/// Reads `re`, `re,im` or `x,re,im` rows; `#` starts a comment line.
pub fn read_samples(path: &Path) -> Result<Samples, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_samples(&text)
}

pub fn parse_samples(text: &str) -> Result<Samples, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Samples { values: vec![], xs: vec![] };
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Parse(format!("malformed CSV: {e}")))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let nums = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Parse(format!("line {line}: cannot parse {f:?} as a finite number")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        let (x, re, im) = match nums.as_slice() {
            [re] => (None, *re, 0.0),
            [re, im] => (None, *re, *im),
            [x, re, im] => (Some(*x), *re, *im),
            _ => {
                return Err(CliError::Parse(format!(
                    "line {line}: expected 1 to 3 fields, found {}",
                    nums.len()
                )))
            }
        };
        out.values.push(Complex64::new(re, im));
        out.xs.push(x);
    }
    Ok(out)
}

pub fn cmd_project(a: &ProjectArgs) -> Result<(Outcome, Option<String>), CliError> {
    let p = ext_params(a.b, a.m_dim, a.n)?;
    let samples = read_samples(&a.input)?;
    if samples.values.len() != p.n {
        return Err(CliError::Data(format!(
            "expected {} samples, got {}",
            p.n,
            samples.values.len()
        )));
    }
    let lat = lattice_nodes(&p);
    for (j, (x, &want)) in samples.xs.iter().zip(&lat.nodes_x).enumerate() {
        if let Some(x) = x {
            if (x - want).abs() > 1e-9 {
                return Err(CliError::Data(format!("sample {}: x = {x} but the lattice point is {want}", j + 1)));
            }
        }
    }
    let approx = project(&p, &samples.values)?;
    let mut t = Table::new("project", &["x", "re_E", "im_E", "abs_E"]);
    let mut max_e = 0.0f64;
    for (&x, &f) in lat.nodes_x.iter().zip(&samples.values) {
        let e = f - eval_extension(&approx, x);
        max_e = max_e.max(e.norm());
        t.rows.push(vec![x.into(), e.re.into(), e.im.into(), e.norm().into()]);
    }
    t.meta("b", format!("{}/{}", a.b.p, a.b.q));
    t.meta("N", Cell::Int(p.n as i64));
    t.meta("M", Cell::Int(p.m_dim as i64));
    t.meta("max_abs_E", max_e);
    t.meta("data_norm_sqr", discrete_norm_sqr(&samples.values));
    t.meta("energy", approx.energy());
    t.meta("residual_sqr", approx.residual_sqr(&samples.values));
    let approx_json = approx.to_json();
    let v: Value = serde_json::from_str(&approx_json).map_err(|e| CliError::Io(e.to_string()))?;
    t.extra.push(("approximation".into(), v));
    Ok((Outcome { table: t, code: EXIT_OK }, a.approx.as_ref().map(|_| approx_json)))
}
