//! Problem parameters and the equispaced sample lattice.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::highprec::{ExtendedComplex, ExtendedReal};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A positive rational number `p/q` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub p: u64,
    pub q: u64,
}

impl Rational {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        let g = gcd(p, q).max(1);
        Ok(Self { p: p / g, q: q / g })
    }

    pub fn integer(p: u64) -> Self {
        Self { p, q: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn to_xr(self) -> ExtendedReal {
        ExtendedReal::from_ratio(self.p as i64, self.q as i64)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q` or a terminating decimal such as `1.28`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((a, b)) = s.split_once('/') {
            let p = a.trim().parse::<u64>().map_err(|_| bad())?;
            let q = b.trim().parse::<u64>().map_err(|_| bad())?;
            return Rational::new(p, q).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) || frac.len() > 15 {
                return Err(bad());
            }
            let int = if int.is_empty() { 0 } else { int.parse::<u64>().map_err(|_| bad())? };
            let scale = 10u64.pow(frac.len() as u32);
            let frac = frac.parse::<u64>().map_err(|_| bad())?;
            return Rational::new(int * scale + frac, scale);
        }
        Ok(Rational::integer(s.parse::<u64>().map_err(|_| bad())?))
    }
}

/// An angle given as a rational multiple of pi, e.g. `5pi/6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PiMultiple(pub Rational);

impl PiMultiple {
    pub fn radians(self) -> f64 {
        PI * self.0.p as f64 / self.0.q as f64
    }
}

impl FromStr for PiMultiple {
    type Err = Error;

    /// Accepts `pi`, `5pi/6`, `5*pi/6`, `pi/2` and `2pi`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let bad = || Error::Parse(format!("not a rational multiple of pi: {s:?}"));
        let (num, den) = t.split_once("pi").ok_or_else(bad)?;
        let p = if num.is_empty() { 1 } else { num.parse::<u64>().map_err(|_| bad())? };
        let q = if den.is_empty() {
            1
        } else {
            den.strip_prefix('/').ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?
        };
        Ok(PiMultiple(Rational::new(p, q).map_err(|_| bad())?))
    }
}

/// Validated parameter bundle for the extension problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionParams {
    /// Extension period as an exact rational.
    pub b: Rational,
    /// Dimension of the approximation space.
    #[serde(rename = "M")]
    pub m_dim: usize,
    /// Number of samples.
    #[serde(rename = "N")]
    pub n: usize,
    /// Arc half-angle `pi/b`.
    pub alpha: f64,
    /// Circle resolution `N b`.
    pub m: usize,
    /// `m/M`.
    pub xi: f64,
    /// `N/M`.
    pub xi_tilde: f64,
    /// Smallest index of `t(M)`.
    #[serde(rename = "M0")]
    pub m0: i64,
}

/// Equispaced sample points on the interval and their images on the arc.
#[derive(Clone, Debug)]
pub struct ArcLattice {
    pub nodes_x: Vec<f64>,
    pub nodes_z: Vec<Complex64>,
    pub angles: Vec<f64>,
    /// Integer positions `k_j` with `theta_j = 2 pi k_j / m`.
    pub steps: Vec<i64>,
    /// The nodes at double-word precision.
    pub nodes_xz: Vec<ExtendedComplex>,
}

/// Smallest element of the index set `t(M)`.
pub fn min_t(m_dim: usize) -> i64 {
    if m_dim % 2 == 1 {
        -((m_dim as i64 - 1) / 2)
    } else {
        -(m_dim as i64 / 2)
    }
}

/// The index set `t(M)` in increasing order.
pub fn t_set(m_dim: usize) -> std::ops::Range<i64> {
    let lo = min_t(m_dim);
    lo..lo + m_dim as i64
}

/// Validates `(b, M, N)` and derives the remaining quantities.
pub fn make_params(b: Rational, m_dim: usize, n: usize) -> Result<ExtensionParams> {
    if b.p <= b.q {
        return Err(Error::PeriodTooSmall);
    }
    if m_dim == 0 {
        return Err(Error::InvalidParameter("M must be at least 1".into()));
    }
    if n % 2 == 0 {
        return Err(Error::NOddRequired(n as u64));
    }
    if (n as u64 * b.p) % b.q != 0 {
        return Err(Error::NonIntegerM { n: n as u64, p: b.p, q: b.q });
    }
    if m_dim > n {
        return Err(Error::DimensionOrder { m: m_dim as u64, n: n as u64 });
    }
    let m = (n as u64 * b.p / b.q) as usize;
    Ok(ExtensionParams {
        b,
        m_dim,
        n,
        alpha: PI * b.q as f64 / b.p as f64,
        m,
        xi: m as f64 / m_dim as f64,
        xi_tilde: n as f64 / m_dim as f64,
        m0: min_t(m_dim),
    })
}

impl ExtensionParams {
    pub fn b_f64(&self) -> f64 {
        self.b.to_f64()
    }

    /// The same lattice with a different space dimension.
    pub fn with_dim(&self, m_dim: usize) -> Result<Self> {
        make_params(self.b, m_dim, self.n)
    }

    /// Angle of the lattice point with integer position `k`.
    pub fn angle_of_step(&self, k: f64) -> f64 {
        2.0 * PI * k / self.m as f64
    }
}

/// The sample lattice for `params`.
pub fn lattice_nodes(params: &ExtensionParams) -> ArcLattice {
    let n = params.n as i64;
    let half = (n + 1) / 2;
    let mut lat = ArcLattice {
        nodes_x: Vec::with_capacity(params.n),
        nodes_z: Vec::with_capacity(params.n),
        angles: Vec::with_capacity(params.n),
        steps: Vec::with_capacity(params.n),
        nodes_xz: Vec::with_capacity(params.n),
    };
    for j in 1..=n {
        let k = j - half;
        let theta = ExtendedReal::TAU * ExtendedReal::from_ratio(k, params.m as i64);
        let z = ExtendedComplex::cis(theta);
        lat.steps.push(k);
        lat.nodes_x.push(k as f64 / n as f64);
        lat.angles.push(theta.to_f64());
        lat.nodes_z.push(z.to_c64());
        lat.nodes_xz.push(z);
    }
    lat
}
