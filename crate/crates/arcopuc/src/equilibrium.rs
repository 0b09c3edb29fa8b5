//! Constrained equilibrium measure on the arc `[-alpha, alpha]` and the
//! scalar functions built from it.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureSpec};

/// Distance from the cut below which complex evaluators refuse to answer.
pub const CUT_TOL: f64 = 1e-12;

/// Band edge `beta` for the arc half-width `alpha` and density ratio `xi`.
pub fn band_edge(alpha: f64, xi: f64) -> Result<f64> {
    check_alpha_xi(alpha, xi)?;
    let (_, b) = cos_beta(alpha, xi);
    if b >= 1.0 {
        return Err(Error::NoBand(b));
    }
    Ok(b.max(-1.0).acos())
}

fn check_alpha_xi(alpha: f64, xi: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= PI) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, pi]")));
    }
    if !(xi > 1.0) || !xi.is_finite() {
        return Err(Error::InvalidParameter(format!("xi = {xi} must exceed 1")));
    }
    Ok(())
}

/// Returns `(tan(pi/(2 xi)), cos beta)`.
fn cos_beta(alpha: f64, xi: f64) -> (f64, f64) {
    let t = (PI / (2.0 * xi)).tan();
    let a = alpha.cos();
    (t, a + (1.0 + a) * t * t)
}

/// The equilibrium measure together with its Lagrange multiplier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumData {
    pub alpha: f64,
    pub xi: f64,
    pub beta: f64,
    pub ell: f64,
    #[serde(rename = "A")]
    pub a_cos: f64,
    #[serde(rename = "B")]
    pub b_cos: f64,
    /// `tan(pi / (2 xi))`.
    pub tan_half: f64,
    #[serde(skip)]
    pub quad: QuadratureSpec,
}

impl EquilibriumData {
    /// Builds the measure for `alpha` in `(0, pi]` and `xi > 1`.
    ///
    /// The fully saturated limit `xi = pi/alpha` (where `cos beta = 1`) is
    /// accepted with `beta = 0`; anything below it has no admissible measure.
    pub fn new(alpha: f64, xi: f64) -> Result<Self> {
        Self::with_quadrature(alpha, xi, QuadratureSpec::default())
    }

    pub fn with_quadrature(alpha: f64, xi: f64, quad: QuadratureSpec) -> Result<Self> {
        check_alpha_xi(alpha, xi)?;
        let (t, mut b) = cos_beta(alpha, xi);
        if b >= 1.0 {
            if b - 1.0 > 1e-12 {
                return Err(Error::NoBand(b));
            }
            b = 1.0;
        }
        let b = b.max(-1.0);
        let mut eq = Self {
            alpha,
            xi,
            beta: b.acos(),
            ell: 0.0,
            a_cos: alpha.cos(),
            b_cos: b,
            tan_half: t,
            quad,
        };
        eq.ell = if 1.0 - b > 1e-8 {
            lagrange_multiplier_with(alpha, xi, eq.beta, &eq.quad)?
        } else {
            2.0 * eq.log_transform_l(eq.beta)?
        };
        Ok(eq)
    }

    fn check_phi(&self, phi: f64) -> Result<()> {
        if !(phi.abs() <= self.alpha * (1.0 + 4.0 * f64::EPSILON)) {
            return Err(Error::OutOfDomain(format!("|phi| = {} > alpha = {}", phi.abs(), self.alpha)));
        }
        Ok(())
    }

    /// Density without the domain check.
    fn rho(&self, theta: f64) -> f64 {
        let th = theta.abs();
        if th >= self.beta {
            return self.xi / (2.0 * PI);
        }
        // cos(th) - cos(beta), written to keep relative accuracy near beta.
        let d = 2.0 * ((self.beta + th) / 2.0).sin() * ((self.beta - th) / 2.0).sin();
        let arg = SQRT_2 * self.tan_half * (th / 2.0).cos() / d.sqrt();
        self.xi / (PI * PI) * arg.atan()
    }

    /// Equilibrium density at `theta`.
    pub fn density_rho(&self, theta: f64) -> Result<f64> {
        self.check_phi(theta)?;
        Ok(self.rho(theta))
    }

    fn band_integral(&self, lo: f64, hi: f64) -> Result<f64> {
        let lo = lo.max(-self.beta);
        let hi = hi.min(self.beta);
        if lo >= hi {
            return Ok(0.0);
        }
        let spec = self.quad.clone().with_splits(&[0.0]);
        integrate(|t| self.rho(t), lo, hi, &spec)
    }

    /// `I(phi)`: mass of the measure on `[phi, alpha]`.
    pub fn band_mass_i(&self, phi: f64) -> Result<f64> {
        self.check_phi(phi)?;
        let phi = phi.clamp(-self.alpha, self.alpha);
        let overlap = |lo: f64, hi: f64| (hi - lo.max(phi)).max(0.0);
        let sat = overlap(self.beta, self.alpha) + overlap(-self.alpha, -self.beta);
        Ok(self.xi / (2.0 * PI) * sat + self.band_integral(phi, self.alpha)?)
    }

    /// Total mass; equals one.
    pub fn total_mass(&self) -> Result<f64> {
        self.band_mass_i(-self.alpha)
    }

    /// `L(phi) = int log|e^{i phi} - e^{i theta}| rho(theta) d theta`.
    pub fn log_transform_l(&self, phi: f64) -> Result<f64> {
        self.check_phi(phi)?;
        let splits = [-self.beta, self.beta, phi, 0.0];
        let spec = self.quad.clone().with_splits(&splits);
        integrate(
            |t| (2.0 * ((phi - t) / 2.0).sin()).abs().ln() * self.rho(t),
            -self.alpha,
            self.alpha,
            &spec,
        )
    }

    /// `l` from its defining double form `2 int log|1 - e^{i theta}| rho`.
    pub fn lagrange_multiplier_direct(&self) -> Result<f64> {
        Ok(2.0 * self.log_transform_l(0.0)?)
    }

    /// Resolvent `int rho(theta) / (z - e^{i theta}) d theta` by quadrature.
    pub fn resolvent(&self, z: Complex64) -> Result<Complex64> {
        self.check_off_arc(z)?;
        let spec = self.quad.clone().with_splits(&[-self.beta, self.beta, z.arg(), 0.0]);
        integrate(|t| self.rho(t) / (z - Complex64::from_polar(1.0, t)), -self.alpha, self.alpha, &spec)
    }

    fn check_off_arc(&self, z: Complex64) -> Result<()> {
        if (z.norm() - 1.0).abs() < CUT_TOL && z.arg().abs() <= self.alpha + CUT_TOL {
            return Err(Error::OnCut);
        }
        Ok(())
    }

    /// `w = (z - e^{i beta}) / (z - e^{-i beta})` and its argument on the
    /// branch continuous off the cut `C_beta`.
    fn w_branch(&self, z: Complex64) -> (f64, f64) {
        let eb = Complex64::from_polar(1.0, self.beta);
        let w = (z - eb) / (z - eb.conj());
        let arg = (w * eb.conj()).arg() + self.beta;
        (w.norm(), arg)
    }

    /// `sqrt(R(z))` with the cut on `C_beta` and `sqrt(R(z)) ~ z` at infinity.
    pub fn sqrt_r(&self, z: Complex64) -> Complex64 {
        let (r, arg) = self.w_branch(z);
        let eb = Complex64::from_polar(1.0, -self.beta);
        (z - eb) * Complex64::from_polar(r.sqrt(), arg / 2.0)
    }

    /// `((z - e^{-i beta}) / (z - e^{i beta}))^{1/4}` with `gamma(inf) = 1`.
    pub fn gamma(&self, z: Complex64) -> Result<Complex64> {
        if (z.norm() - 1.0).abs() < CUT_TOL && z.arg().abs() <= self.beta + CUT_TOL {
            return Err(Error::OnCut);
        }
        let (r, arg) = self.w_branch(z);
        Ok(Complex64::from_polar(r.powf(-0.25), -arg / 4.0))
    }

    /// Derivative of the g-function in closed form.
    pub fn g_prime(&self, z: Complex64) -> Result<Complex64> {
        if (z.norm() - 1.0).abs() < CUT_TOL && z.arg().abs() <= self.beta + CUT_TOL {
            return Err(Error::OnCut);
        }
        if z.norm() < 1e-6 {
            // The closed form is 0/0 at the origin; the resolvent is regular there.
            return self.resolvent(z);
        }
        let s = (z + 1.0) * self.tan_half / self.sqrt_r(z);
        Ok(0.5 / z + self.xi / (PI * z) * s.atan())
    }

    /// `g(z) = int log(z - e^{i theta}) rho(theta) d theta` by quadrature.
    pub fn g_function(&self, z: Complex64) -> Result<Complex64> {
        if (z.norm() - 1.0).abs() < CUT_TOL || (z.im == 0.0 && z.re <= -1.0) {
            return Err(Error::OnCut);
        }
        let outside = z.norm() > 1.0;
        let log_z = z.ln();
        let f = |t: f64| {
            let e = Complex64::from_polar(1.0, t);
            let l = if outside {
                log_z + (1.0 - e / z).ln()
            } else {
                Complex64::new(0.0, t + PI) + (1.0 - z / e).ln()
            };
            l * self.rho(t)
        };
        let spec = self.quad.clone().with_splits(&[-self.beta, self.beta, z.arg(), 0.0]);
        integrate(f, -self.alpha, self.alpha, &spec)
    }

    /// `J(theta) = (cos theta - cos beta) / (1 - cos(beta - theta))`.
    pub fn j_fn(&self, theta: f64) -> f64 {
        j_fn(self.beta, theta)
    }
}

/// `J(theta) = (cos theta - cos beta) / (1 - cos(beta - theta))`.
///
/// Both factors are rewritten with half angles, which cancels the common
/// zero at `theta = beta` and leaves `cot`-type behaviour:
/// `J = sin((beta + theta)/2) / sin((beta - theta)/2)`.
pub fn j_fn(beta: f64, theta: f64) -> f64 {
    let s = ((beta - theta) / 2.0).sin();
    if s == 0.0 {
        return f64::INFINITY;
    }
    ((beta + theta) / 2.0).sin() / s
}

/// Lagrange multiplier from its single-integral closed form.
pub fn lagrange_multiplier(alpha: f64, xi: f64, beta: f64) -> Result<f64> {
    lagrange_multiplier_with(alpha, xi, beta, &QuadratureSpec::default())
}

fn lagrange_multiplier_with(alpha: f64, xi: f64, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_alpha_xi(alpha, xi)?;
    if !(beta > 0.0 && beta <= alpha) {
        return Err(Error::InvalidParameter(format!("beta = {beta} outside (0, alpha]")));
    }
    let t = (PI / (2.0 * xi)).tan();
    let integral = log_kernel_integral(beta.cos(), t, spec)?;
    Ok(-2.0 * xi * t / PI * integral)
}

/// `int_1^{sqrt(2/(1-B))} log[(1 + Bx^2 + x sqrt(1+B) sqrt(2 - x^2(1-B))) / (x^2-1)] / (1 + x^2 t^2) dx`.
fn log_kernel_integral(b: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    if b <= -1.0 {
        return Ok(0.0);
    }
    let top = (2.0 / (1.0 - b)).sqrt();
    let f = |x: f64| {
        let rad = (2.0 - x * x * (1.0 - b)).max(0.0).sqrt();
        let num = 1.0 + b * x * x + x * (1.0 + b).sqrt() * rad;
        (num / ((x - 1.0) * (x + 1.0))).ln() / (1.0 + x * x * t * t)
    };
    integrate(f, 1.0, top, spec)
}

/// Limit of the Lagrange multiplier as `xi -> infinity`.
pub fn lagrange_multiplier_limit(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, pi)")));
    }
    Ok(-log_kernel_integral(alpha.cos(), 0.0, &QuadratureSpec::default())?)
}

/// Density of the unconstrained equilibrium measure in the `x` variable.
pub fn unconstrained_density(b: f64, x: f64) -> Result<f64> {
    if !(x.abs() < 0.5) {
        return Err(Error::OutOfDomain(format!("|x| = {} >= 1/2", x.abs())));
    }
    if !(b > 1.0) {
        return Err(Error::PeriodTooSmall);
    }
    // cos(2 pi x / b) - cos(pi / b) as a product of sines.
    let d = 2.0 * (PI * (0.5 + x) / b).sin() * (PI * (0.5 - x) / b).sin();
    Ok(SQRT_2 * (PI * x / b).cos() / (b * d.sqrt()))
}

/// Critical density `xi_alpha` solving `L(alpha; alpha, xi) = 0`.
///
/// `L(alpha; alpha, xi)` decreases in `xi`, so the root is bracketed between
/// the fully saturated limit `xi = pi/alpha` and a large cap, with the
/// conjectured value `pi/(pi - alpha)` used to narrow the bracket first.
pub fn xi_critical(alpha: f64) -> Result<f64> {
    const XI_CAP: f64 = 50.0;
    const TOL: f64 = 1e-10;
    if !(alpha < PI) || !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside (0, pi)")));
    }
    if alpha < FRAC_PI_2 * (1.0 - 1e-12) {
        return Err(Error::NoRoot(format!("L(alpha; alpha, xi) < 0 for every xi when alpha = {alpha} < pi/2")));
    }
    let f = |xi: f64| -> Result<f64> { EquilibriumData::new(alpha, xi)?.log_transform_l(alpha) };
    let mut lo = PI / alpha;
    let mut f_lo = f(lo)?;
    if f_lo.abs() < 1e-12 {
        return Ok(lo);
    }
    if f_lo < 0.0 {
        return Err(Error::NoRoot(format!("L(alpha) = {f_lo} < 0 already at xi = pi/alpha")));
    }
    let mut hi = XI_CAP;
    let guess = PI / (PI - alpha);
    if guess > lo && guess < hi {
        let fg = f(guess)?;
        if fg == 0.0 {
            return Ok(guess);
        }
        if fg > 0.0 {
            lo = guess;
            f_lo = fg;
        } else {
            hi = guess;
        }
    }
    let mut f_hi = f(hi)?;
    if f_lo * f_hi > 0.0 {
        return Err(Error::BracketFailure(format!("no sign change of L(alpha) on [{lo}, {hi}]")));
    }
    // Illinois-modified regula falsi, falling back to bisection.
    let mut side = 0;
    for _ in 0..200 {
        if hi - lo < TOL * hi {
            break;
        }
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            lo = x;
            f_lo = fx;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            f_hi = fx;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Prop.-1.2 variables: `beta~` and `L~(x) = L(2 pi x / b; pi/b, b xi~)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TildeValues {
    pub beta_tilde: f64,
    pub l_tilde: f64,
}

/// `beta~` in `(0, 1/2)` directly from its defining cosine relation.
pub fn beta_tilde(b: f64, xi_tilde: f64) -> Result<f64> {
    if !(b > 1.0) {
        return Err(Error::PeriodTooSmall);
    }
    let a = (PI / b).cos();
    let c = a + (1.0 + a) * (PI / (2.0 * xi_tilde * b)).tan().powi(2);
    if c >= 1.0 {
        return Err(Error::NoBand(c));
    }
    Ok(b / (2.0 * PI) * c.acos())
}

/// Evaluates `beta~` and `L~(x)` for period `b` and ratio `xi~ = N/M`.
pub fn tilde_wrappers(b: f64, xi_tilde: f64, x: f64) -> Result<TildeValues> {
    if !(x.abs() <= 0.5) {
        return Err(Error::OutOfDomain(format!("|x| = {} > 1/2", x.abs())));
    }
    let eq = EquilibriumData::new(PI / b, b * xi_tilde)?;
    Ok(TildeValues {
        beta_tilde: beta_tilde(b, xi_tilde)?,
        l_tilde: eq.log_transform_l(2.0 * PI * x / b)?,
    })
}
