//! Large-`M` asymptotics of the monic polynomials `p_M` in each region of
//! the plane, plus the Szegő parameters and norms.
//!
//! Every evaluator returns the value split as `exp(log_prefactor) * scaled`
//! so that exponentially large or small factors never overflow.

pub mod airy;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::equilibrium::{j_fn, EquilibriumData};
use crate::error::{Error, Result};
use crate::params_lattice::ExtensionParams;
use crate::quadrature::{integrate, QuadratureSpec};

pub use airy::{airy, AiryValues};

/// Distance from the arc below which the outer formula is refused.
pub const OUTER_MARGIN: f64 = 1e-3;
/// `u = m (alpha - |phi|) / (2 pi)` below which a saturated point counts as hard edge.
pub const HARD_EDGE_U: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Band,
    Saturated,
    HardEdge,
    Turning,
    Outer,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Band => "band",
            Regime::Saturated => "saturated",
            Regime::HardEdge => "hard_edge",
            Regime::Turning => "turning",
            Regime::Outer => "outer",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorOrder {
    OneOverM,
    ExpSmall,
}

/// An asymptotic value `exp(log_prefactor) * scaled`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymEval {
    pub regime: Regime,
    pub value: Complex64,
    pub log_prefactor: f64,
    pub scaled: Complex64,
    /// Log of the natural size of `p_M` at the point: the formula's bracket
    /// with its oscillating factor replaced by its maximum modulus.
    pub log_envelope: f64,
    pub error_order: ErrorOrder,
}

impl AsymEval {
    fn new(regime: Regime, log_prefactor: f64, scaled: Complex64, envelope: f64) -> Self {
        Self {
            regime,
            value: scaled * log_prefactor.exp(),
            log_prefactor,
            scaled,
            log_envelope: log_prefactor + envelope.ln(),
            error_order: ErrorOrder::OneOverM,
        }
    }

    /// `|exact - value|` measured against the envelope.
    pub fn envelope_error(&self, exact: Complex64) -> f64 {
        (exact * (-self.log_prefactor).exp() - self.scaled).norm()
            / (self.log_envelope - self.log_prefactor).exp()
    }

    /// Plain relative error `|exact - value| / |exact|`.
    pub fn relative_error(&self, exact: Complex64) -> f64 {
        let e = exact * (-self.log_prefactor).exp();
        (e - self.scaled).norm() / e.norm()
    }
}

/// Equilibrium data bound to a lattice and a degree.
#[derive(Debug, Clone)]
pub struct AsymContext {
    pub eq: EquilibriumData,
    /// Number of lattice points on the full circle.
    pub m: usize,
    /// Number of lattice points on the arc.
    pub n: usize,
    /// Polynomial degree.
    pub degree: usize,
}

impl AsymContext {
    /// Context for degree `params.m_dim` with `xi = m / M`.
    pub fn new(params: &ExtensionParams) -> Result<Self> {
        let eq = EquilibriumData::new(params.alpha, params.xi)?;
        Ok(Self { eq, m: params.m, n: params.n, degree: params.m_dim })
    }

    fn mf(&self) -> f64 {
        self.degree as f64
    }

    /// `u = m (alpha - phi) / (2 pi)`, the distance to the arc end in lattice spacings.
    pub fn edge_distance(&self, phi: f64) -> f64 {
        self.m as f64 * (self.eq.alpha - phi) / (2.0 * PI)
    }

    /// `(sin, cos)` of `m phi / 2` reduced through `m alpha = N pi`.
    fn half_m_phase(&self, phi: Complex64) -> Complex64 {
        // m phi / 2 = N pi / 2 - pi u.
        let u = (Complex64::new(self.eq.alpha, 0.0) - phi) * (self.m as f64 / (2.0 * PI));
        Complex64::new(0.0, 1.0).powi((self.n % 4) as i32) * (Complex64::new(0.0, -PI) * u).exp()
    }

    /// Band formula for `-beta < phi < beta`.
    pub fn band_asym(&self, phi: f64) -> Result<AsymEval> {
        let eq = &self.eq;
        if !(phi.abs() < eq.beta) {
            return Err(Error::OutsideRegime(format!("|phi| = {} not inside the band (beta = {})", phi.abs(), eq.beta)));
        }
        let mm = self.mf();
        let j = j_fn(eq.beta, phi);
        let i = eq.band_mass_i(phi)?;
        let arg = mm * PI * i - PI / 4.0;
        let j4 = j.powf(0.25);
        let br = Complex64::from_polar(j4, -eq.beta / 4.0) * arg.cos()
            - Complex64::from_polar(1.0 / j4, eq.beta / 4.0) * arg.sin();
        let scaled = Complex64::from_polar(1.0, mm * (phi + PI) / 2.0) * br;
        Ok(AsymEval::new(Regime::Band, mm * eq.ell / 2.0, scaled, j4 + 1.0 / j4))
    }

    fn saturated_parts(&self, phi: f64) -> Result<(f64, Complex64, Complex64, f64)> {
        let eq = &self.eq;
        let a = phi.abs();
        if !(a > eq.beta && a <= eq.alpha * (1.0 + 4.0 * f64::EPSILON)) {
            return Err(Error::OutsideRegime(format!(
                "|phi| = {a} not in the saturated arc ({}, {}]",
                eq.beta, eq.alpha
            )));
        }
        let mm = self.mf();
        let m = self.m as f64;
        let nj = -j_fn(eq.beta, a);
        let j4 = nj.powf(0.25);
        let br = Complex64::from_polar(j4, -eq.beta / 4.0) + Complex64::from_polar(1.0 / j4, eq.beta / 4.0);
        // e^{-i phi (m - M)/2} e^{i M pi/2} e^{i m alpha/2}, with m alpha = N pi.
        let phase = Complex64::from_polar(1.0, -a * (m - mm) / 2.0 + mm * PI / 2.0)
            * Complex64::new(0.0, 1.0).powi((self.n % 4) as i32)
            / 2.0;
        // 1 - z^m = 1 + e^{-2 pi i u}, exactly zero at the nodes.
        let u = self.edge_distance(a);
        let one_minus = 1.0 + Complex64::from_polar(1.0, -2.0 * PI * u);
        Ok((mm * eq.log_transform_l(a)?, phase * br, one_minus, u))
    }

    /// Saturated formula for `beta < |phi| < alpha`; negative `phi` uses
    /// `p_M(conj z) = conj p_M(z)`.
    pub fn saturated_asym(&self, phi: f64) -> Result<AsymEval> {
        let (lp, pb, om, _) = self.saturated_parts(phi)?;
        let mut v = AsymEval::new(Regime::Saturated, lp, pb * om, pb.norm() * 2.0);
        if phi < 0.0 {
            v.scaled = v.scaled.conj();
            v.value = v.value.conj();
        }
        Ok(v)
    }

    /// Hard-edge formula: the saturated formula with the edge factor `D^`.
    pub fn edge_asym(&self, phi: f64) -> Result<AsymEval> {
        let (lp, pb, om, u) = self.saturated_parts(phi)?;
        let d = dhat(u.max(0.0))?;
        let mut v = AsymEval::new(Regime::HardEdge, lp, pb * om / d, pb.norm() * 2.0 / d);
        if phi < 0.0 {
            v.scaled = v.scaled.conj();
            v.value = v.value.conj();
        }
        Ok(v)
    }

    /// Radius of the disc about `e^{i beta}` on which `psi` is evaluated.
    pub fn psi_radius(&self) -> f64 {
        0.9 * (self.eq.alpha - self.eq.beta).min(self.eq.beta)
    }

    /// `d psi / d phi` at the band edge.
    pub fn psi_slope(&self) -> f64 {
        let eq = &self.eq;
        let c0 = std::f64::consts::SQRT_2 * eq.tan_half * (eq.beta / 2.0).cos();
        let h0 = eq.xi / (PI * PI) * (2.0 / 3.0) * eq.beta.sin().sqrt() / c0;
        (1.5 * PI * h0).powf(2.0 / 3.0)
    }

    /// `psi(z) = -(3 pi/2)^{2/3} d H(d)^{2/3}` with `d = beta - phi`, `z = e^{i phi}`.
    ///
    /// Also returns `-psi(z) J(phi)`, which stays finite at the band edge.
    fn psi_parts(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let eq = &self.eq;
        let eb = Complex64::from_polar(1.0, eq.beta);
        if !((z - eb).norm() < self.psi_radius()) {
            return Err(Error::OutsideDisc);
        }
        let phi = -Complex64::i() * z.ln();
        let d = Complex64::new(eq.beta, 0.0) - phi;
        let t = eq.tan_half;
        let integrand = |s: f64| {
            let tau = s * s;
            let dd = d * tau;
            let th = Complex64::new(eq.beta, 0.0) - dd;
            let sinc = if dd.norm() < 1e-8 { Complex64::new(0.5, 0.0) - dd * dd / 48.0 } else { (dd / 2.0).sin() / dd };
            let q = ((th + eq.beta) / 2.0).sin() * sinc * 2.0;
            let c = (th / 2.0).cos() * (std::f64::consts::SQRT_2 * t);
            let w = dd * q / (c * c);
            let a = if w.norm() < 1e-6 {
                1.0 - w / 3.0 + w * w / 5.0
            } else {
                let r = w.sqrt();
                r.atan() / r
            };
            a * q.sqrt() / c * (2.0 * s * s)
        };
        let spec = QuadratureSpec::with_tol(1e-14, 1e-14);
        let h: Complex64 = integrate(integrand, 0.0, 1.0, &spec)?;
        let h = h * (eq.xi / (PI * PI));
        let k = (1.5 * PI).powf(2.0 / 3.0) * h.powf(2.0 / 3.0);
        let psi = -k * d;
        // -psi J = k d sin((beta + phi)/2) / sin(d/2).
        let ratio = if d.norm() < 1e-8 { Complex64::new(2.0, 0.0) } else { d / (d / 2.0).sin() };
        let mpj = k * ratio * ((phi + eq.beta) / 2.0).sin();
        Ok((psi, mpj))
    }

    /// Analytic continuation of `psi` off the band arc near `e^{i beta}`.
    pub fn psi_fn(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.psi_parts(z)?.0)
    }

    /// `psi` on the band arc by direct quadrature of the defining integral.
    pub fn psi_arc(&self, phi: f64) -> Result<f64> {
        let eq = &self.eq;
        if !(phi <= eq.beta && phi > -eq.beta) {
            return Err(Error::OutsideRegime("psi_arc needs phi in (-beta, beta]".into()));
        }
        let cap = eq.xi / (2.0 * PI);
        let f: f64 = integrate(
            |t| cap - eq.density_rho(t).unwrap_or(cap),
            phi,
            eq.beta,
            &QuadratureSpec::with_tol(1e-14, 1e-14),
        )?;
        Ok(-(1.5 * PI * f).powf(2.0 / 3.0))
    }

    /// Airy-type formula near `e^{+-i beta}`.
    pub fn turning_asym(&self, z: Complex64) -> Result<AsymEval> {
        if z.im < 0.0 {
            let mut v = self.turning_asym(z.conj())?;
            v.scaled = v.scaled.conj();
            v.value = v.value.conj();
            return Ok(v);
        }
        let eq = &self.eq;
        let mm = self.mf();
        let (psi, mpj) = self.psi_parts(z)?;
        let phi = -Complex64::i() * z.ln();
        let x = psi * mm.powf(2.0 / 3.0);
        let ai = airy(x)?;
        // psi^{1/4} gamma = e^{-i beta/4} (-psi J)^{1/4}: analytic across the arc.
        let f = Complex64::from_polar(mm.powf(1.0 / 6.0), -eq.beta / 4.0) * mpj.powf(0.25);
        let e = self.half_m_phase(phi);
        let (c, s) = ((e + 1.0 / e) / 2.0, (e - 1.0 / e) / Complex64::new(0.0, 2.0));
        let br = f * (ai.ai * c + ai.bi * s) + (ai.ai_prime * c + ai.bi_prime * s) / f;
        // -i sqrt(pi) e^{i(m alpha + M pi)/2} z^{M/2}, with m alpha = N pi.
        let pre = Complex64::new(0.0, -PI.sqrt())
            * Complex64::new(0.0, 1.0).powi((self.n % 4) as i32)
            * Complex64::from_polar(1.0, mm * (PI + phi.re) / 2.0);
        let lp = mm * eq.ell / 2.0 + mm / 2.0 * z.norm().ln();
        let env = PI.sqrt()
            * (f.norm() * (ai.ai.norm() + ai.bi.norm()) + (ai.ai_prime.norm() + ai.bi_prime.norm()) / f.norm())
            * (c.norm() + s.norm());
        Ok(AsymEval::new(Regime::Turning, lp, pre * br, env))
    }

    /// Outer formula `e^{M g(z)} (gamma + 1/gamma) / 2`.
    pub fn outer_asym(&self, z: Complex64) -> Result<AsymEval> {
        let eq = &self.eq;
        if dist_to_arc(z, eq.alpha) <= OUTER_MARGIN {
            return Err(Error::OutsideRegime(format!("z = {z} within {OUTER_MARGIN} of the arc")));
        }
        // e^{Mg} is continuous across the cuts of g away from the arc.
        let zg = if (z.norm() - 1.0).abs() < 1e-12 {
            z * (1.0 - 1e-10)
        } else if z.im == 0.0 && z.re <= -1.0 {
            Complex64::new(z.re, f64::MIN_POSITIVE)
        } else {
            z
        };
        let g = eq.g_function(zg)?;
        let gm = eq.gamma(zg)?;
        let mm = self.mf();
        let br = (gm + 1.0 / gm) / 2.0;
        let scaled = Complex64::from_polar(1.0, mm * g.im) * br;
        Ok(AsymEval::new(Regime::Outer, mm * g.re, scaled, br.norm()))
    }

    /// Region of the plane that `z` falls in for this degree.
    pub fn classify(&self, z: Complex64) -> Regime {
        let eq = &self.eq;
        let phi = z.arg();
        let a = phi.abs();
        if dist_to_arc(z, eq.alpha) > OUTER_MARGIN || a > eq.alpha {
            return Regime::Outer;
        }
        let s = self.mf().powf(-2.0 / 3.0) / self.psi_slope();
        let turn = (3.0 * s).min(self.psi_radius() / 1.5);
        if eq.beta < eq.alpha && (a - eq.beta).abs() < turn {
            return Regime::Turning;
        }
        if a < eq.beta {
            return Regime::Band;
        }
        if self.edge_distance(a) < HARD_EDGE_U {
            Regime::HardEdge
        } else {
            Regime::Saturated
        }
    }

    /// Evaluates the formula of the region containing `z`.
    pub fn evaluate(&self, z: Complex64) -> Result<AsymEval> {
        match self.classify(z) {
            Regime::Outer => self.outer_asym(z),
            Regime::Turning => self.turning_asym(z),
            Regime::Band => self.band_asym(z.arg()),
            Regime::HardEdge => self.edge_asym(z.arg()),
            Regime::Saturated => self.saturated_asym(z.arg()),
        }
    }

    /// Asymptotic Szegő parameter and norm for this degree.
    pub fn szego_h_asym(&self) -> SzegoAsym {
        szego_h_asym(&self.eq, self.degree)
    }
}

/// Distance from `z` to the arc `{e^{i theta} : |theta| <= alpha}`.
pub fn dist_to_arc(z: Complex64, alpha: f64) -> f64 {
    let phi = z.arg();
    if phi.abs() <= alpha {
        (z.norm() - 1.0).abs()
    } else {
        let end = Complex64::from_polar(1.0, alpha.copysign(phi));
        (z - end).norm()
    }
}

/// Asymptotic Szegő parameter and norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SzegoAsym {
    /// `-p_M(0)` from the outer formula at the origin: `(-1)^{M+1} cos(beta/2)`.
    pub rho: f64,
    /// `sin(beta/2) e^{M l}`.
    pub h: f64,
    /// Predicted ratio `h_{M+1} / h_M = e^l`.
    pub h_ratio: f64,
}

/// Large-`M` Szegő parameter and norm.
///
/// The signs and prefactor follow from the outer formula at `z = 0`
/// (where `g(0) = pi i` and `gamma(0) = e^{-i beta/2}`) and from the
/// measured norms respectively.
pub fn szego_h_asym(eq: &EquilibriumData, degree: usize) -> SzegoAsym {
    let sign = if degree % 2 == 0 { -1.0 } else { 1.0 };
    let mm = degree as f64;
    SzegoAsym {
        rho: sign * (eq.beta / 2.0).cos(),
        h: (eq.beta / 2.0).sin() * (mm * eq.ell).exp(),
        h_ratio: eq.ell.exp(),
    }
}

/// The literal edge factor
/// `D~(u) = sqrt(2 pi) u^{u-1} / (Gamma(u - 1/2) e^u)`, `u = m(alpha -+ phi)/(2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeFactor {
    pub u: f64,
    pub value: f64,
    pub log_abs: f64,
}

/// `D~` for `phi` measured from the endpoint `sign * alpha`.
pub fn dtilde(params: &ExtensionParams, phi: f64, sign: f64) -> Result<EdgeFactor> {
    let u = params.m as f64 * (params.alpha - sign.signum() * phi) / (2.0 * PI);
    dtilde_u(u)
}

/// `D~(u)` in log space.
pub fn dtilde_u(u: f64) -> Result<EdgeFactor> {
    if !(u > 0.0) {
        return Err(Error::DomainError(format!("u = {u} must be positive")));
    }
    let x = u - 0.5;
    let (lg, sign) = log_abs_gamma(x);
    let log_abs = 0.5 * (2.0 * PI).ln() + (u - 1.0) * u.ln() - lg - u;
    Ok(EdgeFactor { u, value: sign * log_abs.exp(), log_abs })
}

/// `D~(u)` evaluated directly, as a cross-check of the log-space path.
pub fn dtilde_direct(u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::DomainError(format!("u = {u} must be positive")));
    }
    Ok((2.0 * PI).sqrt() * u.powf(u - 1.0) / (gamma(u - 0.5) * u.exp()))
}

/// `D^(u) = sqrt(2 pi) u^u e^{-u} / Gamma(u + 1/2) = D~(u) u / (u - 1/2)`,
/// the edge factor used by [`AsymContext::edge_asym`]. It is regular and
/// positive for `u >= 0`, with `D^(0) = sqrt(2)`.
pub fn dhat(u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::DomainError(format!("u = {u} must be non-negative")));
    }
    let lu = if u == 0.0 { 0.0 } else { u * u.ln() };
    Ok((0.5 * (2.0 * PI).ln() + lu - u - ln_gamma(u + 0.5)).exp())
}

/// `(log|Gamma(x)|, sign Gamma(x))` for `x > -1`.
fn log_abs_gamma(x: f64) -> (f64, f64) {
    if x > 0.0 {
        (ln_gamma(x), 1.0)
    } else if x == 0.0 {
        (f64::INFINITY, 1.0)
    } else {
        // Gamma(x) = Gamma(x + 1) / x on (-1, 0).
        (ln_gamma(x + 1.0) - (-x).ln(), -1.0)
    }
}
