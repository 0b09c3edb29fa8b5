//! Exact-versus-asymptotic comparisons and convergence-rate fits.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{AsymContext, AsymEval, Regime};
use crate::error::{Error, Result};
use crate::highprec::ExtendedComplex;
use crate::opuc::OpucSystem;

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidParameter("a fit needs at least two paired points".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameter("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("abscissae must differ".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(LogLogFit { slope, intercept: my - slope * mx })
}

/// Which stretch of the arc a comparison covers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ArcGrid {
    /// `[0, 0.6 beta]`.
    Band,
    /// The middle 60% of `(beta, alpha)`.
    Saturated,
    /// The last tenth of `(beta, alpha]`.
    Edge,
    /// `[0, alpha]`.
    Full,
    /// Explicit angles `start..=stop`.
    Range { start: f64, stop: f64 },
}

impl ArcGrid {
    pub fn angles(&self, ctx: &AsymContext, count: usize) -> Vec<f64> {
        let (b, a) = (ctx.eq.beta, ctx.eq.alpha);
        let w = a - b;
        let (lo, hi) = match *self {
            ArcGrid::Band => (0.0, 0.6 * b),
            ArcGrid::Saturated => (b + 0.2 * w, a - 0.2 * w),
            ArcGrid::Edge => (a - 0.1 * w, a),
            ArcGrid::Full => (0.0, a),
            ArcGrid::Range { start, stop } => (start, stop),
        };
        let count = count.max(2);
        (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
    }
}

/// One point of an exact-versus-asymptotic comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub phi: f64,
    pub exact: Complex64,
    pub asym: AsymEval,
    /// `|exact - asym| / |exact|`.
    pub rel_error: f64,
    /// `|exact - asym|` divided by the formula's envelope.
    pub envelope_error: f64,
    /// `|exact|` is below `1e-3` of the envelope, so `rel_error` reflects
    /// an absolute rather than relative discrepancy.
    pub near_zero: bool,
}

impl ComparisonRow {
    pub fn regime(&self) -> Regime {
        self.asym.regime
    }
}

/// Compares `p_M(e^{i phi})` from the recursion with the asymptotic formula
/// chosen by [`AsymContext::classify`], or by `force` when given.
pub fn compare_on_arc(
    sys: &OpucSystem,
    ctx: &AsymContext,
    phis: &[f64],
    force: Option<Regime>,
) -> Result<Vec<ComparisonRow>> {
    if ctx.degree > sys.degree_max {
        return Err(Error::DegreeTooLarge { degree: ctx.degree, limit: sys.degree_max });
    }
    phis.iter()
        .map(|&phi| {
            let z = Complex64::from_polar(1.0, phi);
            let asym = match force {
                None => ctx.evaluate(z)?,
                Some(Regime::Band) => ctx.band_asym(phi)?,
                Some(Regime::Saturated) => ctx.saturated_asym(phi)?,
                Some(Regime::HardEdge) => ctx.edge_asym(phi)?,
                Some(Regime::Turning) => ctx.turning_asym(z)?,
                Some(Regime::Outer) => ctx.outer_asym(z)?,
            };
            let exact = sys.eval_x(ctx.degree, ExtendedComplex::from(z)).to_c64();
            Ok(row(phi, exact, asym))
        })
        .collect()
}

/// Comparison at an arbitrary point off the arc, reported with `phi = arg z`.
pub fn compare_at(sys: &OpucSystem, ctx: &AsymContext, z: Complex64) -> Result<ComparisonRow> {
    let asym = ctx.evaluate(z)?;
    let exact = sys.eval_x(ctx.degree, ExtendedComplex::from(z)).to_c64();
    Ok(row(z.arg(), exact, asym))
}

fn row(phi: f64, exact: Complex64, asym: AsymEval) -> ComparisonRow {
    let envelope_error = asym.envelope_error(exact);
    let scale = (asym.log_envelope).exp();
    let near_zero = exact.norm() < 1e-3 * scale;
    ComparisonRow { phi, exact, asym, rel_error: asym.relative_error(exact), envelope_error, near_zero }
}

/// Midpoints between consecutive lattice angles that fall in `(lo, hi)`.
pub fn lattice_midpoints(sys: &OpucSystem, lo: f64, hi: f64) -> Vec<f64> {
    let lat = crate::params_lattice::lattice_nodes(&sys.params);
    lat.angles
        .windows(2)
        .map(|w| 0.5 * (w[0] + w[1]))
        .filter(|&p| p > lo && p < hi)
        .collect()
}

/// Angle spacing `2 pi / m` of the lattice.
pub fn lattice_spacing(ctx: &AsymContext) -> f64 {
    2.0 * PI / ctx.m as f64
}
