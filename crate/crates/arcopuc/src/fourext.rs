//! Discrete least-squares Fourier extension of equispaced samples.
//!
//! Samples of `f` on the lattice `x_j` are projected onto
//! `span{e^{2 pi i k x / b} : k in t(M)}`. The projection runs through the
//! orthonormal polynomials of [`crate::opuc`], so no ill-conditioned normal
//! equations are ever formed; Fourier coefficients are recovered by a
//! triangular basis change.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::highprec::{ExtendedComplex as XC, ExtendedReal as X};
use crate::io::{hex_to_xr, xr_to_hex};
use crate::opuc::{point_on_circle, szego_system, KernelTable, OpucSystem};
use crate::params_lattice::{lattice_nodes, make_params, min_t, ExtensionParams, Rational};

/// A least-squares extension `q` of sampled data.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionApprox {
    pub params: ExtensionParams,
    /// `<f, phi_l>_N` for `l = 0..M`.
    pub coeffs_ortho: Vec<XC>,
    /// Coefficient of `e^{2 pi i k x / b}` for `k = M_0, ..., M_0 + M - 1`.
    pub coeffs_fourier: Vec<XC>,
}

/// `e^{2 pi i r / m}` at double-word precision.
fn root_of_unity(r: i64, m: i64) -> XC {
    XC::cis(X::TAU * X::from_ratio(r.rem_euclid(m), m))
}

/// `(1/N) sum_j |f_j|^2`.
pub fn discrete_norm_sqr(samples: &[Complex64]) -> f64 {
    samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / samples.len() as f64
}

/// Projects samples `f(x_j)`, ordered by lattice index, onto the extension space.
pub fn project(params: &ExtensionParams, samples: &[Complex64]) -> Result<ExtensionApprox> {
    if samples.len() != params.n {
        return Err(Error::SampleCountMismatch { expected: params.n, got: samples.len() });
    }
    let sys = szego_system(params, params.m_dim - 1)?;
    project_with(&sys, samples)
}

/// [`project`] with a prebuilt polynomial system of degree at least `M - 1`.
pub fn project_with(sys: &OpucSystem, samples: &[Complex64]) -> Result<ExtensionApprox> {
    let params = &sys.params;
    let md = params.m_dim;
    if samples.len() != params.n {
        return Err(Error::SampleCountMismatch { expected: params.n, got: samples.len() });
    }
    if sys.degree_max + 1 < md {
        return Err(Error::DegreeTooLarge { degree: md, limit: sys.degree_max + 1 });
    }
    let lat = lattice_nodes(params);
    let m = params.m as i64;
    let m0 = params.m0;
    // Remove the phase e^{2 pi i M_0 x / b} so the data live in span{w^n}.
    let shifted: Vec<XC> = samples
        .iter()
        .zip(&lat.steps)
        .map(|(&f, &k)| XC::from(f) * root_of_unity(-m0 * k, m))
        .collect();
    let inv_n = X::ONE / params.n as f64;
    let mut ortho = Vec::with_capacity(md);
    for l in 0..md {
        let scale = sys.phi_scale(l);
        let s: XC = lat
            .nodes_xz
            .iter()
            .zip(&shifted)
            .map(|(&z, &f)| sys.eval_x(l, z).conj() * f)
            .sum();
        ortho.push((s / scale).scale(inv_n));
    }
    let fourier = ortho_to_fourier(sys, &ortho);
    Ok(ExtensionApprox { params: params.clone(), coeffs_ortho: ortho, coeffs_fourier: fourier })
}

/// `d_n = sum_l c_l [w^n] phi_l(w)`.
pub fn ortho_to_fourier(sys: &OpucSystem, ortho: &[XC]) -> Vec<XC> {
    let mut d = vec![XC::ZERO; ortho.len()];
    for (l, &c) in ortho.iter().enumerate() {
        let cs = c / sys.phi_scale(l);
        for (n, &a) in sys.coeffs[l].iter().enumerate() {
            d[n] += cs.scale(a);
        }
    }
    d
}

/// Inverse of [`ortho_to_fourier`] by back-substitution (the monic leading
/// coefficients make the system unit upper triangular up to scaling).
pub fn fourier_to_ortho(sys: &OpucSystem, fourier: &[XC]) -> Vec<XC> {
    let md = fourier.len();
    let mut c = vec![XC::ZERO; md];
    for l in (0..md).rev() {
        let mut r = fourier[l];
        for j in l + 1..md {
            r -= (c[j] / sys.phi_scale(j)).scale(sys.coeffs[j][l]);
        }
        c[l] = r * sys.phi_scale(l);
    }
    c
}

impl ExtensionApprox {
    /// `||q||_N^2 = sum_l |c_l|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs_ortho.iter().map(|c| c.norm_sqr().to_f64()).sum()
    }

    /// Residual `||f - q||_N^2` from the coefficients alone.
    pub fn residual_sqr(&self, samples: &[Complex64]) -> f64 {
        discrete_norm_sqr(samples) - self.energy()
    }

    /// Fourier coefficients at native precision, keyed by frequency.
    pub fn fourier_f64(&self) -> Vec<(i64, Complex64)> {
        self.coeffs_fourier
            .iter()
            .enumerate()
            .map(|(n, c)| (self.params.m0 + n as i64, c.to_c64()))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let pair = |c: &XC| [xr_to_hex(c.re), xr_to_hex(c.im)];
        let doc = ApproxJson {
            schema: 1,
            b: self.params.b.to_string(),
            m_dim: self.params.m_dim,
            n: self.params.n,
            m0: self.params.m0,
            coeffs_ortho: self.coeffs_ortho.iter().map(pair).collect(),
            coeffs_fourier: self.coeffs_fourier.iter().map(pair).collect(),
            fourier_decimal: self.fourier_f64().into_iter().map(|(k, c)| (k, c.re, c.im)).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ApproxJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema != 1 {
            return Err(Error::Parse(format!("unsupported schema {}", doc.schema)));
        }
        let params = make_params(doc.b.parse::<Rational>()?, doc.m_dim, doc.n)?;
        let conv = |v: &[[[String; 2]; 2]]| {
            v.iter()
                .map(|[re, im]| Ok(XC::new(hex_to_xr(re)?, hex_to_xr(im)?)))
                .collect::<Result<Vec<_>>>()
        };
        let coeffs_ortho = conv(&doc.coeffs_ortho)?;
        let coeffs_fourier = conv(&doc.coeffs_fourier)?;
        if coeffs_ortho.len() != params.m_dim || coeffs_fourier.len() != params.m_dim {
            return Err(Error::Parse("coefficient count differs from M".into()));
        }
        Ok(Self { params, coeffs_ortho, coeffs_fourier })
    }
}

#[derive(Serialize, Deserialize)]
struct ApproxJson {
    schema: u32,
    b: String,
    #[serde(rename = "M")]
    m_dim: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M0")]
    m0: i64,
    coeffs_ortho: Vec<[[String; 2]; 2]>,
    coeffs_fourier: Vec<[[String; 2]; 2]>,
    /// `(k, re, im)` rounded to `f64`, for readers without hex-float support.
    fourier_decimal: Vec<(i64, f64, f64)>,
}

/// `q(x) = sum_k d_k e^{2 pi i k x / b}`, summed in double-word precision.
pub fn eval_extension(approx: &ExtensionApprox, x: f64) -> Complex64 {
    eval_extension_x(approx, x).to_c64()
}

fn eval_extension_x(approx: &ExtensionApprox, x: f64) -> XC {
    let w = point_on_circle(&approx.params, x);
    let mut acc = XC::ZERO;
    for &d in approx.coeffs_fourier.iter().rev() {
        acc = acc * w + d;
    }
    acc * phase_m0(approx.params.m0, w)
}

fn phase_m0(m0: i64, w: XC) -> XC {
    if m0 >= 0 {
        w.powi(m0)
    } else {
        w.conj().powi(-m0)
    }
}

/// `E(x) = f(x) - q(x)`.
pub fn error_function(approx: &ExtensionApprox, f: impl Fn(f64) -> Complex64, x: f64) -> Complex64 {
    f(x) - eval_extension(approx, x)
}

/// Geometric decay envelope `|a_k| <= amplitude * ratio^|k|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayEnvelope {
    pub amplitude: f64,
    pub ratio: f64,
}

/// Fourier coefficients `a_k` of an extension of `f`: either finitely
/// supported (`envelope = None`) or known up to some order with a decay
/// envelope covering all `k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierCoeffSeq {
    pub a: BTreeMap<i64, Complex64>,
    pub envelope: Option<DecayEnvelope>,
}

impl FourierCoeffSeq {
    pub fn finite(a: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        Self { a: a.into_iter().collect(), envelope: None }
    }

    /// `a_k = amplitude * ratio^|k|` stored for `|k| <= k_max`, with the matching envelope.
    pub fn geometric(amplitude: f64, ratio: f64, k_max: i64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0 && amplitude >= 0.0) {
            return Err(Error::InvalidParameter("geometric envelope needs 0 < r < 1, A >= 0".into()));
        }
        let a = (-k_max..=k_max)
            .map(|k| (k, Complex64::new(amplitude * ratio.powi(k.unsigned_abs() as i32), 0.0)))
            .collect();
        Ok(Self { a, envelope: Some(DecayEnvelope { amplitude, ratio }) })
    }

    /// `sum_k a_k e^{2 pi i k x / b}` over the stored coefficients.
    pub fn eval(&self, b: f64, x: f64) -> Complex64 {
        self.a
            .iter()
            .map(|(&k, &c)| c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 * x / b))
            .sum()
    }
}

/// Bound on `|E(x)|` from the error series:
/// `sum_{k not in t(M), |k| <= cutoff} |B^k(x)| |a_k|` plus a tail estimate
/// using `|B^k(x)| <= 1 + sum_{l<M} |phi_l|`.
///
/// `sys` must reach degree `M`.
pub fn error_series_bound(sys: &OpucSystem, a: &FourierCoeffSeq, x: f64, k_cutoff: u64) -> Result<f64> {
    let md = sys.params.m_dim;
    let table = KernelTable::new(sys, md)?;
    let m0 = min_t(md);
    let in_space = |k: i64| k >= m0 && k < m0 + md as i64;
    let cut = k_cutoff as i64;
    let mut total = 0.0;
    for (&k, &c) in a.a.range(-cut..=cut) {
        if in_space(k) || c == Complex64::new(0.0, 0.0) {
            continue;
        }
        total += table.error_term(k, x)?.norm() * c.norm();
    }
    let beyond = a.a.keys().any(|&k| k.abs() > cut);
    match a.envelope {
        Some(DecayEnvelope { amplitude, ratio }) => {
            let tail = 2.0 * amplitude * ratio.powi(cut as i32 + 1) / (1.0 - ratio);
            total += table.simple_bound(x) * tail;
        }
        None if beyond => return Err(Error::NoEnvelope),
        None => {}
    }
    Ok(total)
}
