//! Monic orthogonal polynomials on the sample lattice of the arc.
//!
//! The inner product is `<p, q> = (1/m) sum_z conj(p(z)) q(z)` over the
//! lattice points `z`. Because the lattice is symmetric about the real axis
//! the polynomials have real coefficients, and for real coefficient vectors
//! the inner product reduces to `sum_{a,b} p_a q_b c_{b-a}` in terms of the
//! moments `c_k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::highprec::{ExtendedComplex, ExtendedReal};
use crate::io::{hex_to_xr, xr_to_hex};
use crate::params_lattice::{lattice_nodes, ArcLattice, ExtensionParams};

type X = ExtendedReal;
type XC = ExtendedComplex;

/// Lattice moments `c_k = (1/m) sum_z z^k` for `k = 0..=k_max`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub m: usize,
    pub c: Vec<X>,
}

impl MomentTable {
    /// `c_k` for any integer `k`, using `c_{-k} = c_k` and `m`-periodicity.
    pub fn get(&self, k: i64) -> X {
        let k = k.unsigned_abs() as usize;
        if k < self.c.len() {
            self.c[k]
        } else {
            self.c[k % self.m]
        }
    }
}

/// Closed-form moments of the lattice measure.
pub fn moments(params: &ExtensionParams, k_max: usize) -> MomentTable {
    let m = params.m as i64;
    let n = params.n as i64;
    let len = (k_max + 1).max(params.m.min(k_max + 1));
    let c = (0..len as i64)
        .map(|k| {
            let r = k.rem_euclid(m);
            if r == 0 {
                X::from_ratio(n, m)
            } else {
                // sin(pi k N/m) with the argument reduced mod 2m.
                let a = (r * n).rem_euclid(2 * m);
                let num = (X::PI * X::from_ratio(a, m)).sin();
                let den = (X::PI * X::from_ratio(r, m)).sin() * m as f64;
                num / den
            }
        })
        .collect();
    MomentTable { m: params.m, c }
}

/// Moments by direct summation over the lattice, as an oracle for [`moments`].
pub fn moments_direct(params: &ExtensionParams, k_max: usize) -> Vec<X> {
    let lat = lattice_nodes(params);
    let m = params.m as i64;
    (0..=k_max as i64)
        .map(|k| {
            let s: X = lat
                .steps
                .iter()
                .map(|&j| (X::TAU * X::from_ratio((j * k).rem_euclid(m), m)).cos())
                .sum();
            s / m as f64
        })
        .collect()
}

/// Monic orthogonal polynomials of degrees `0..=degree_max` with their
/// Szegő parameters and norms.
#[derive(Clone, Debug)]
pub struct OpucSystem {
    pub params: ExtensionParams,
    pub degree_max: usize,
    /// `coeffs[j][i]` is the coefficient of `z^i` in `p_j`.
    pub coeffs: Vec<Vec<X>>,
    /// `rho[j - 1]` holds `rho_j = -p_j(0)`.
    pub rho: Vec<X>,
    /// `h[j] = <p_j, p_j>`.
    pub h: Vec<X>,
}

/// Value of a polynomial at a point, with the log-magnitude kept separately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyValue {
    pub value: Complex64,
    pub log_abs: f64,
}

impl From<XC> for PolyValue {
    fn from(v: XC) -> Self {
        PolyValue {
            value: v.to_c64(),
            log_abs: v.abs().ln().to_f64(),
        }
    }
}

#[cfg(test)]
fn ip_moments(mt: &MomentTable, p: &[X], q: &[X]) -> X {
    let mut s = X::ZERO;
    for (a, pa) in p.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        let mut t = X::ZERO;
        for (b, qb) in q.iter().enumerate() {
            t += *qb * mt.get(b as i64 - a as i64);
        }
        s += *pa * t;
    }
    s
}

/// Builds the system by the Szegő recursion `p_{j+1} = z p_j - rho_{j+1} p_j^*`.
///
/// The recursion is carried out on the values of `p_j` at the lattice
/// points alongside the coefficients. Each new polynomial is
/// reorthogonalized against its predecessors in the lattice inner product,
/// and `rho_{j+1}` is read off as `-p_{j+1}(0)` afterwards. Without this
/// correction rounding errors grow by roughly a factor 7 per degree.
pub fn szego_system(params: &ExtensionParams, m_max: usize) -> Result<OpucSystem> {
    if m_max >= params.n {
        return Err(Error::DegreeTooLarge { degree: m_max, limit: params.n - 1 });
    }
    let lat = lattice_nodes(params);
    let z = &lat.nodes_xz;
    let inv_m = X::ONE / params.m as f64;
    let ip = |a: &[XC], b: &[XC]| -> X {
        let s: X = a.iter().zip(b).map(|(u, v)| (u.conj() * *v).re).sum();
        s * inv_m
    };
    let mut coeffs = vec![vec![X::ONE]];
    let mut vals: Vec<Vec<XC>> = vec![vec![XC::ONE; params.n]];
    let mut rho = Vec::with_capacity(m_max);
    let mut h = vec![X::from_ratio(params.n as i64, params.m as i64)];
    for j in 0..m_max {
        let p = &coeffs[j];
        let pv = &vals[j];
        let zp: Vec<XC> = z.iter().zip(pv).map(|(z, v)| *z * *v).collect();
        // On the unit circle p_j^*(z) = z^j conj(p_j(z)).
        let ps: Vec<XC> = z.iter().zip(pv).map(|(z, v)| z.powi(j as i64) * v.conj()).collect();
        let num: XC = zp.iter().map(|v| v.conj()).sum();
        let den: XC = ps.iter().map(|v| v.conj()).sum();
        let r = (num / den).re;
        let mut next = vec![X::ZERO; j + 2];
        for i in 0..=j {
            next[i + 1] += p[i];
            next[i] -= r * p[j - i];
        }
        let mut nv: Vec<XC> = zp.iter().zip(&ps).map(|(a, b)| *a - b.scale(r)).collect();
        for k in 0..=j {
            let c = ip(&vals[k], &nv) / h[k];
            for (a, b) in nv.iter_mut().zip(&vals[k]) {
                *a -= b.scale(c);
            }
            for (a, b) in next.iter_mut().zip(&coeffs[k]) {
                *a -= c * *b;
            }
        }
        let r = -next[0];
        let hn = ip(&nv, &nv);
        if !(r.abs().to_f64() < 1.0) || !(hn.hi > 0.0) {
            return Err(Error::LostOrthogonality { degree: j + 1, rho: r.to_f64() });
        }
        rho.push(r);
        h.push(hn);
        coeffs.push(next);
        vals.push(nv);
    }
    Ok(OpucSystem { params: params.clone(), degree_max: m_max, coeffs, rho, h })
}

fn horner(c: &[X], z: XC) -> XC {
    let mut acc = XC::ZERO;
    for a in c.iter().rev() {
        acc = acc * z + XC::from_real(*a);
    }
    acc
}

/// Classical Gram–Schmidt (with one reorthogonalization pass) on the
/// monomials, with inner products summed node by node.
pub fn gram_schmidt_oracle(params: &ExtensionParams, m_max: usize) -> Result<OpucSystem> {
    let limit = 20.min(params.n - 1);
    if m_max > limit {
        return Err(Error::DegreeTooLarge { degree: m_max, limit });
    }
    let lat = lattice_nodes(params);
    let m = params.m as f64;
    let ip = |p: &[X], q: &[X]| -> X {
        let s: X = lat
            .nodes_xz
            .iter()
            .map(|&z| (horner(p, z).conj() * horner(q, z)).re)
            .sum();
        s / m
    };
    let mut coeffs: Vec<Vec<X>> = Vec::with_capacity(m_max + 1);
    let mut h: Vec<X> = Vec::with_capacity(m_max + 1);
    for j in 0..=m_max {
        let mut p = vec![X::ZERO; j + 1];
        p[j] = X::ONE;
        for _pass in 0..2 {
            let proj: Vec<X> = (0..j).map(|i| ip(&coeffs[i], &p) / h[i]).collect();
            for (i, c) in proj.into_iter().enumerate() {
                for (a, q) in coeffs[i].iter().enumerate() {
                    p[a] -= c * *q;
                }
            }
            p[j] = X::ONE;
        }
        let hj = ip(&p, &p);
        if !(hj.hi > 0.0) {
            return Err(Error::LostOrthogonality { degree: j, rho: f64::NAN });
        }
        h.push(hj);
        coeffs.push(p);
    }
    let rho = (1..=m_max).map(|j| -coeffs[j][0]).collect();
    Ok(OpucSystem { params: params.clone(), degree_max: m_max, coeffs, rho, h })
}

impl OpucSystem {
    /// The Szegő parameter `rho_j` for `j >= 1`.
    pub fn rho_j(&self, j: usize) -> X {
        self.rho[j - 1]
    }

    /// `h_0 prod_{i<=j} (1 - rho_i^2)`.
    pub fn h_from_rho(&self, j: usize) -> X {
        (1..=j).fold(self.h[0], |acc, i| acc * (X::ONE - self.rho_j(i).sqr()))
    }

    /// Evaluates `p_j` at a double-word point.
    pub fn eval_x(&self, j: usize, z: XC) -> XC {
        horner(&self.coeffs[j], z)
    }

    /// Evaluates the reversed polynomial `p_j^*` at a double-word point.
    pub fn eval_star_x(&self, j: usize, z: XC) -> XC {
        let c = &self.coeffs[j];
        let mut acc = XC::ZERO;
        for a in c.iter() {
            acc = acc * z + XC::from_real(*a);
        }
        acc
    }

    /// `sqrt(b h_j)`, the factor relating monic and orthonormal polynomials.
    pub fn phi_scale(&self, j: usize) -> X {
        (self.params.b.to_xr() * self.h[j]).sqrt()
    }

    pub fn to_json(&self) -> String {
        let doc = OpucJson {
            schema: 1,
            b: self.params.b.to_string(),
            n: self.params.n,
            degree_max: self.degree_max,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.iter().map(|x| xr_to_hex(*x)).collect())
                .collect(),
            rho: self.rho.iter().map(|x| xr_to_hex(*x)).collect(),
            h: self.h.iter().map(|x| xr_to_hex(*x)).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: OpucJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema != 1 {
            return Err(Error::Parse(format!("unsupported schema {}", doc.schema)));
        }
        let b = doc.b.parse()?;
        let params = crate::params_lattice::make_params(b, doc.degree_max.max(1), doc.n)?;
        let conv = |v: &[[String; 2]]| v.iter().map(|s| hex_to_xr(s)).collect::<Result<Vec<_>>>();
        Ok(OpucSystem {
            params,
            degree_max: doc.degree_max,
            coeffs: doc.coeffs.iter().map(|c| conv(c)).collect::<Result<_>>()?,
            rho: conv(&doc.rho)?,
            h: conv(&doc.h)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct OpucJson {
    schema: u32,
    b: String,
    #[serde(rename = "N")]
    n: usize,
    degree_max: usize,
    coeffs: Vec<Vec<[String; 2]>>,
    rho: Vec<[String; 2]>,
    h: Vec<[String; 2]>,
}

/// `p_j(z)` at native precision, with its log-magnitude.
pub fn eval_monic(sys: &OpucSystem, j: usize, z: Complex64) -> PolyValue {
    sys.eval_x(j, z.into()).into()
}

/// Coefficients of `p_j^*(z) = z^j p_j(1/z)`, lowest degree first.
pub fn reverse_poly(sys: &OpucSystem, j: usize) -> Vec<X> {
    sys.coeffs[j].iter().rev().copied().collect()
}

/// Orthonormal polynomial `p_j(z) / sqrt(b h_j)`.
pub fn normalized_phi(sys: &OpucSystem, j: usize, z: Complex64) -> Complex64 {
    (sys.eval_x(j, z.into()) / sys.phi_scale(j)).to_c64()
}

/// Christoffel–Darboux kernel value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub n: i64,
    pub m_dim: usize,
    pub w: Complex64,
    pub value: Complex64,
}

/// Precomputed lattice data for repeated kernel and error-term evaluation
/// with a fixed dimension `M`.
#[derive(Clone, Debug)]
pub struct KernelTable<'a> {
    pub sys: &'a OpucSystem,
    pub m_dim: usize,
    lattice: ArcLattice,
    roots: Vec<XC>,
    /// `pvals[j][node]` for `j <= M` (row `M` only when `M <= degree_max`).
    pvals: Vec<Vec<XC>>,
    pstar_m: Option<Vec<XC>>,
}

impl<'a> KernelTable<'a> {
    pub fn new(sys: &'a OpucSystem, m_dim: usize) -> Result<Self> {
        if m_dim > sys.degree_max + 1 {
            return Err(Error::DegreeTooLarge { degree: m_dim, limit: sys.degree_max + 1 });
        }
        let params = &sys.params;
        let lattice = lattice_nodes(params);
        let m = params.m as i64;
        let roots = (0..m).map(|r| XC::cis(X::TAU * X::from_ratio(r, m))).collect();
        let top = m_dim.min(sys.degree_max);
        let pvals = (0..=top)
            .map(|j| lattice.nodes_xz.iter().map(|&z| sys.eval_x(j, z)).collect())
            .collect();
        let pstar_m = (m_dim <= sys.degree_max)
            .then(|| lattice.nodes_xz.iter().map(|&z| sys.eval_star_x(m_dim, z)).collect());
        Ok(Self { sys, m_dim, lattice, roots, pvals, pstar_m })
    }

    fn node_pow(&self, node: usize, n: i64) -> XC {
        let m = self.sys.params.m as i64;
        self.roots[(self.lattice.steps[node] * n).rem_euclid(m) as usize]
    }

    /// Direct double-sum form of `K_{n,M}(w)`.
    pub fn direct(&self, n: i64, w: XC) -> XC {
        let m = self.sys.params.m as f64;
        let mut total = XC::ZERO;
        for j in 0..self.m_dim {
            let s: XC = (0..self.lattice.nodes_xz.len())
                .map(|i| self.pvals[j][i].conj() * self.node_pow(i, n))
                .sum();
            total += self.sys.eval_x(j, w) * s / self.sys.h[j];
        }
        total.scale(X::ONE / m)
    }

    /// Christoffel–Darboux closed form of `K_{n,M}(w)`; `None` when `w` is
    /// (numerically) a lattice node or `p_M` is not available.
    pub fn closed_form(&self, n: i64, w: XC) -> Option<XC> {
        let pstar = self.pstar_m.as_ref()?;
        let md = self.m_dim;
        let pm_w = self.sys.eval_x(md, w);
        let ps_w = self.sys.eval_star_x(md, w);
        let mut total = XC::ZERO;
        for (i, z) in self.lattice.nodes_xz.iter().enumerate() {
            let den = XC::ONE - z.conj() * w;
            if den.abs().to_f64() < 1e-12 {
                return None;
            }
            let num = self.pvals[md][i] * ps_w - pstar[i] * pm_w;
            total += self.node_pow(i, n - md as i64) * num / den;
        }
        Some(total.scale(X::ONE / (self.sys.h[md] * self.sys.params.m as f64)))
    }

    /// Kernel value via the closed form, checked against the double sum.
    pub fn kernel(&self, n: i64, w: XC) -> Result<XC> {
        let d = self.direct(n, w);
        match self.closed_form(n, w) {
            None => Ok(d),
            Some(c) => {
                let scale = d.abs().to_f64().max(1.0);
                let diff = (c - d).abs().to_f64() / scale;
                if diff > 1e-12 {
                    Err(Error::FormMismatch(diff))
                } else {
                    Ok(c)
                }
            }
        }
    }

    /// `B^k(x)` from the kernel, with `n = k - M_0`.
    pub fn error_term(&self, k: i64, x: f64) -> Result<Complex64> {
        let w = point_on_circle(&self.sys.params, x);
        let n = k - crate::params_lattice::min_t(self.m_dim);
        Ok((w.powi(n) - self.kernel(n, w)?).to_c64())
    }

    /// `B^k(x)` from the orthonormal-polynomial definition, summing over the
    /// sample points `x_j` directly.
    pub fn error_term_direct(&self, k: i64, x: f64) -> Complex64 {
        let params = &self.sys.params;
        let m0 = crate::params_lattice::min_t(self.m_dim);
        let n = k - m0;
        let w = point_on_circle(params, x);
        let mut acc = XC::ZERO;
        for l in 0..self.m_dim {
            let scale = self.sys.phi_scale(l);
            let s: XC = (0..self.lattice.nodes_xz.len())
                .map(|i| self.node_pow(i, n) * (self.pvals[l][i] / scale).conj())
                .sum();
            acc += self.sys.eval_x(l, w) / scale * s;
        }
        (w.powi(n) - acc.scale(X::ONE / params.n as f64)).to_c64()
    }

    /// `B^k(x)` through the expansion `z^n = sum_j x_{n,j} p_j`: the tail
    /// `sum_{j=M}^{n} x_{n,j} p_j(w)`. Requires `M <= n <= degree_max`.
    pub fn error_term_tail(&self, k: i64, x: f64) -> Option<Complex64> {
        let n = k - crate::params_lattice::min_t(self.m_dim);
        if n < self.m_dim as i64 || n as usize > self.sys.degree_max {
            return None;
        }
        let w = point_on_circle(&self.sys.params, x);
        let xs = expansion_coeffs(self.sys, n as usize);
        let s: XC = (self.m_dim..=n as usize)
            .map(|j| self.sys.eval_x(j, w).scale(xs[j]))
            .sum();
        Some(s.to_c64())
    }

    /// The upper bound `1 + sum_{l<M} |phi_l(w)|`.
    pub fn simple_bound(&self, x: f64) -> f64 {
        let w = point_on_circle(&self.sys.params, x);
        1.0 + (0..self.m_dim)
            .map(|l| (self.sys.eval_x(l, w).abs() / self.sys.phi_scale(l)).to_f64())
            .sum::<f64>()
    }

    /// `K_{n,M}(w)` for `n >= M` assembled from `p_M`, `p_M^*` and the
    /// moments `r_{M,k}`, `r^*_{M,k}`:
    /// `w^n - w^{n-M} p_M(w) + sum_{k=1}^{n-M} (p_M^*(w) r_{M,k} - p_M(w) r^*_{M,k}) w^{n-M-k} / h_M`.
    pub fn residue_form(&self, n: i64, w: XC) -> Option<XC> {
        let md = self.m_dim;
        if n < md as i64 || md > self.sys.degree_max {
            return None;
        }
        let pm = self.sys.eval_x(md, w);
        let ps = self.sys.eval_star_x(md, w);
        let d = (n - md as i64) as usize;
        let mut acc = w.powi(n) - w.powi(d as i64) * pm;
        for k in 1..=d {
            let (r, rs) = r_quantities(self.sys, md, k as i64);
            let c = (ps.scale(r) - pm.scale(rs)) / self.sys.h[md];
            acc += c * w.powi((d - k) as i64);
        }
        Some(acc)
    }
}

/// `e^{2 pi i x / b}` at double-word precision.
pub fn point_on_circle(params: &ExtensionParams, x: f64) -> XC {
    XC::cis(X::TAU * X::from(x) * X::from_ratio(params.b.q as i64, params.b.p as i64))
}

/// Christoffel–Darboux kernel `K_{n,M}(w)`, cross-checked against the
/// double-sum definition.
pub fn cd_kernel(sys: &OpucSystem, n: i64, m_dim: usize, w: Complex64) -> Result<KernelValue> {
    let t = KernelTable::new(sys, m_dim)?;
    let v = t.kernel(n, w.into())?;
    Ok(KernelValue { n, m_dim, w, value: v.to_c64() })
}

/// Error term `B^k_{N,M}(x)` for the dimension `M` of `sys.params`,
/// computed from the kernel and checked against the direct definition.
pub fn error_term_b(sys: &OpucSystem, k: i64, x: f64) -> Result<Complex64> {
    if !(-0.5..=0.5).contains(&x) {
        return Err(Error::OutOfDomain(format!("x = {x} outside [-1/2, 1/2]")));
    }
    let t = KernelTable::new(sys, sys.params.m_dim)?;
    let a = t.error_term(k, x)?;
    let d = t.error_term_direct(k, x);
    let scale = t.simple_bound(x);
    let diff = (a - d).norm() / scale;
    if diff > 1e-12 {
        return Err(Error::FormMismatch(diff));
    }
    Ok(a)
}

/// `r_{M,k} = (1/m) sum_z z^k p_M(z)` and `r^*_{M,k} = (1/m) sum_z z^k p_M^*(z)`.
pub fn r_quantities(sys: &OpucSystem, m_dim: usize, k: i64) -> (X, X) {
    let params = &sys.params;
    let lat = lattice_nodes(params);
    let m = params.m as i64;
    let mut r = XC::ZERO;
    let mut rs = XC::ZERO;
    for (i, &z) in lat.nodes_xz.iter().enumerate() {
        let zk = XC::cis(X::TAU * X::from_ratio((lat.steps[i] * k).rem_euclid(m), m));
        r += zk * sys.eval_x(m_dim, z);
        rs += zk * sys.eval_star_x(m_dim, z);
    }
    (r.re / m as f64, rs.re / m as f64)
}

/// Coefficients `x_{n,j}`, `j = 0..=n`, of `z^n = sum_j x_{n,j} p_j(z)`,
/// by back-substitution through the triangular coefficient array.
pub fn expansion_coeffs(sys: &OpucSystem, n: usize) -> Vec<X> {
    let mut x = vec![X::ZERO; n + 1];
    x[n] = X::ONE;
    for i in (0..n).rev() {
        let mut s = X::ZERO;
        for j in i + 1..=n {
            s += x[j] * sys.coeffs[j][i];
        }
        x[i] = -s;
    }
    x
}
