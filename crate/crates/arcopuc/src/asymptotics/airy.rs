//! Airy functions `Ai`, `Bi` and their derivatives for complex arguments.
//!
//! Power series in double-double arithmetic near the origin, the standard
//! asymptotic expansion of `Ai` in the sector `|arg z| <= 2 pi / 3` beyond,
//! and the rotation identities everywhere else.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::highprec::{ExtendedComplex as XC, ExtendedReal as X};

/// Largest `|z|` accepted.
pub const AIRY_ENVELOPE: f64 = 30.0;
/// Switch radius between the power series and the asymptotic expansion.
const SERIES_RADIUS: f64 = 8.0;

const AI0: X = X { hi: 0.3550280538878172, lo: 2.05233632436212e-17 };
const MINUS_AIP0: X = X { hi: 0.2588194037928068, lo: -2.522243111610832e-17 };
const SQRT3: X = X { hi: 1.7320508075688772, lo: 1.0035084221806903e-16 };

/// `Ai(z)`, `Bi(z)`, `Ai'(z)`, `Bi'(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryValues {
    pub ai: Complex64,
    pub bi: Complex64,
    pub ai_prime: Complex64,
    pub bi_prime: Complex64,
}

/// All four Airy values at `z`.
pub fn airy(z: Complex64) -> Result<AiryValues> {
    if !(z.norm() <= AIRY_ENVELOPE) {
        return Err(Error::EnvelopeExceeded(format!("|z| = {} > {AIRY_ENVELOPE}", z.norm())));
    }
    if z.norm() <= SERIES_RADIUS {
        return Ok(series(z));
    }
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let wb = w.conj();
    let (a1, d1) = ai_large(z * w);
    let (a2, d2) = ai_large(z * wb);
    let (ai, ai_prime) = ai_large(z);
    let e6 = Complex64::from_polar(1.0, PI / 6.0);
    let e56 = Complex64::from_polar(1.0, 5.0 * PI / 6.0);
    Ok(AiryValues {
        ai,
        bi: e6 * a1 + e6.conj() * a2,
        ai_prime,
        bi_prime: e56 * d1 + e56.conj() * d2,
    })
}

/// Maclaurin series `Ai = c1 f - c2 g`, `Bi = sqrt3 (c1 f + c2 g)`.
fn series(z: Complex64) -> AiryValues {
    let zx = XC::from(z);
    let z3 = zx * zx * zx;
    // f, g and their derivatives, each accumulated term by term.
    let mut f = XC::ONE;
    let mut g = zx;
    let mut fp = XC::ZERO;
    let mut gp = XC::ONE;
    let mut tf = XC::ONE;
    let mut tg = zx;
    let mut tfp = zx * zx / X::from(2.0);
    let mut tgp = XC::ONE;
    fp += tfp;
    let mut peak = 1.0f64;
    for k in 1..400 {
        let kf = k as f64;
        tf = tf * z3 / X::from((3.0 * kf - 1.0) * (3.0 * kf));
        tg = tg * z3 / X::from((3.0 * kf) * (3.0 * kf + 1.0));
        tgp = tgp * z3 / X::from((3.0 * kf - 2.0) * (3.0 * kf));
        if k >= 2 {
            tfp = tfp * z3 / X::from((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            fp += tfp;
        }
        f += tf;
        g += tg;
        gp += tgp;
        let size = tf.abs().hi.max(tg.abs().hi).max(tfp.abs().hi).max(tgp.abs().hi);
        peak = peak.max(size);
        if size < 1e-34 * peak && k > 3 {
            break;
        }
    }
    let af = f * AI0;
    let ag = g * MINUS_AIP0;
    let afp = fp * AI0;
    let agp = gp * MINUS_AIP0;
    AiryValues {
        ai: (af - ag).to_c64(),
        bi: ((af + ag) * SQRT3).to_c64(),
        ai_prime: (afp - agp).to_c64(),
        bi_prime: ((afp + agp) * SQRT3).to_c64(),
    }
}

/// `(Ai(z), Ai'(z))` for `|z| > SERIES_RADIUS`, any argument.
fn ai_large(z: Complex64) -> (Complex64, Complex64) {
    if z.arg().abs() <= 2.0 * PI / 3.0 + 1e-12 {
        return ai_asymptotic(z);
    }
    // Ai(z) = -w Ai(wz) - w^2 Ai(w^2 z), w = e^{2 pi i / 3}; both rotated
    // points land inside the sector.
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let (a1, d1) = ai_asymptotic(z * w);
    let (a2, d2) = ai_asymptotic(z * w.conj());
    let ai = -w * a1 - w.conj() * a2;
    let ai_prime = -(w * w) * d1 - (w * w).conj() * d2;
    (ai, ai_prime)
}

/// Asymptotic expansion of `Ai` and `Ai'`, truncated at its smallest term.
fn ai_asymptotic(z: Complex64) -> (Complex64, Complex64) {
    let zeta = z.powf(1.5) * (2.0 / 3.0);
    let inv = 1.0 / zeta;
    let mut u = 1.0f64;
    let mut su = Complex64::new(1.0, 0.0);
    let mut sv = Complex64::new(1.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        pw = -pw * inv;
        let tu = pw * u;
        let size = tu.norm();
        if size > last || size < 1e-18 {
            break;
        }
        last = size;
        su += tu;
        sv += pw * v;
    }
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = z.powf(0.25);
    (e / q * su, -e * q * sv)
}
