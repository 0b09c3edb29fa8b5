//! Adaptive Gauss–Kronrod quadrature with interior splits and endpoint
//! substitutions for square-root and logarithmic endpoint behaviour.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding the default subdivision budget.
pub const MAX_SUBDIV_ENV: &str = "ARCOPUC_MAX_SUBDIV";

const DEFAULT_MAX_SUBDIV: usize = 2000;

/// Values that can be integrated: real or complex.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Integration settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: String,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Interior points where the integrand is split.
    pub singularity_splits: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        let max_subdivisions = std::env::var(MAX_SUBDIV_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(DEFAULT_MAX_SUBDIV);
        Self {
            scheme: "gk15-adaptive".into(),
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_subdivisions,
            singularity_splits: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn with_splits(mut self, splits: &[f64]) -> Self {
        self.singularity_splits = splits.to_vec();
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter("quadrature tolerances must be positive".into()));
        }
        Ok(())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Piece<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

impl<T> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Piece<T> {}
impl<T> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One Gauss–Kronrod 7/15 step: (estimate, error, integral of |f|).
fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.magnitude() * WGK[7];
    for i in 0..7 {
        let x = h * XGK[i];
        let f1 = f(c - x);
        let f2 = f(c + x);
        k = k + (f1 + f2) * WGK[i];
        abs += (f1.magnitude() + f2.magnitude()) * WGK[i];
        if i % 2 == 1 {
            g = g + (f1 + f2) * WG[i / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).magnitude(), abs * h.abs())
}

/// Globally adaptive integration of a smooth integrand over `[a, b]`.
fn adapt<T: QuadValue>(
    f: &mut impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<T> {
    let (v, e, abs) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, err: e });
    let mut total = v;
    let mut err = e;
    let mut abs_total = abs;
    for _ in 0..max_subdivisions {
        let floor = 50.0 * f64::EPSILON * abs_total;
        if err <= abs_tol.max(rel_tol * total.magnitude()).max(floor) {
            return Ok(total);
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1, a1) = gk15(f, worst.a, mid);
        let (v2, e2, a2) = gk15(f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        let worst_err = worst.err;
        abs_total += a1 + a2;
        heap.push(Piece { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, err: e2 });
        err = (err - worst_err + e1 + e2).max(0.0);
    }
    let floor = 50.0 * f64::EPSILON * abs_total;
    if err <= abs_tol.max(rel_tol * total.magnitude()).max(floor) {
        Ok(total)
    } else {
        Err(Error::QuadratureFailure(err))
    }
}

/// Integrates `f` over `[a, b]` (`a < b`), splitting at `spec.singularity_splits`.
///
/// Every piece is halved and each half mapped by `x = end ∓ h s^2`, so
/// square-root cusps and logarithmic singularities sitting at a piece end
/// become smooth in `s`. Points where the map rounds onto the endpoint
/// contribute nothing, which is the exact limit of the weighted integrand.
pub fn integrate<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<T> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::DomainError("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(T::zero());
    }
    if a > b {
        return integrate(f, b, a, spec).map(|v| v * -1.0);
    }
    let mut pts = vec![a];
    let mut splits: Vec<f64> =
        spec.singularity_splits.iter().copied().filter(|&s| s > a && s < b).collect();
    splits.sort_by(f64::total_cmp);
    splits.dedup();
    pts.extend(splits);
    pts.push(b);
    let halves = 2 * (pts.len() - 1);
    let tol = spec.abs_tol / halves as f64;
    let mut total = T::zero();
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        for (end, h) in [(lo, mid - lo), (hi, mid - hi)] {
            let mut g = |s: f64| {
                let x = end + h * s * s;
                if x == end {
                    T::zero()
                } else {
                    f(x) * (2.0 * h.abs() * s)
                }
            };
            total = total + adapt(&mut g, 0.0, 1.0, tol, spec.rel_tol, spec.max_subdivisions)?;
        }
    }
    Ok(total)
}
