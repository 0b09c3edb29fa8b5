//! Double-word ("double-double") floating point arithmetic.
//!
//! An [`ExtendedReal`] stores an unevaluated sum `hi + lo` of two `f64`
//! words with `|lo| <= ulp(hi)/2`, giving roughly 106 bits of significand.
//! The basic operations are built from the error-free transformations
//! TwoSum and TwoProd (via fused multiply-add). Elementary functions start
//! from the native `f64` result and refine it at double-word precision.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// A real number represented as the unevaluated sum of two doubles.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExtendedReal {
    pub hi: f64,
    pub lo: f64,
}

impl ExtendedReal {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    pub const TAU: Self = Self {
        hi: 6.283185307179586,
        lo: 2.4492935982947064e-16,
    };
    pub const FRAC_PI_2: Self = Self {
        hi: 1.5707963267948966,
        lo: 6.123233995736766e-17,
    };
    pub const FRAC_PI_4: Self = Self {
        hi: 0.7853981633974483,
        lo: 3.061616997868383e-17,
    };
    pub const LN_2: Self = Self {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };

    /// Builds a value from two words, renormalizing them.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        Self { hi: h, lo: l }
    }

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact ratio `p/q` of two integers, correct to double-word precision.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from(p as f64) / Self::from(q as f64)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn signum(self) -> f64 {
        if self.hi > 0.0 {
            1.0
        } else if self.hi < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Multiplication by a power of two, which is exact.
    pub fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn sqr(self) -> Self {
        let (p, e) = two_prod(self.hi, self.hi);
        let e = e + 2.0 * self.hi * self.lo;
        let (h, l) = quick_two_sum(p, e);
        Self { hi: h, lo: l }
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let mut base = self;
        let mut k = n.unsigned_abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            k >>= 1;
        }
        if n < 0 {
            Self::ONE / acc
        } else {
            acc
        }
    }

    /// Nearest integer (ties away from zero).
    pub fn round(self) -> Self {
        let h = self.hi.round();
        if h == self.hi {
            let l = self.lo.round();
            Self::new(h, l)
        } else if (h - self.hi).abs() == 0.5 && self.lo != 0.0 {
            // Tie on the leading word is broken by the trailing word.
            if (h > self.hi) == (self.lo < 0.0) {
                Self::from_f64(h - (h - self.hi).signum())
            } else {
                Self::from_f64(h)
            }
        } else {
            Self::from_f64(h)
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::ZERO
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        let x = self.hi.sqrt();
        let r = self - Self::from(two_prod(x, x));
        let (h, l) = quick_two_sum(x, r.hi / (2.0 * x));
        Self { hi: h, lo: l }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.78 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - Self::LN_2 * k).ldexp(-10);
        // Taylor series on |r| < 2^-10 * ln(2)/2; 12 terms reach 2^-120.
        let mut term = r;
        let mut sum = r;
        for n in 2..=14 {
            term = term * r / (n as f64);
            sum += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        // exp(r) - 1 squared up: (1 + s)^2 - 1 = 2s + s^2 keeps precision.
        for _ in 0..10 {
            sum = sum.ldexp(1) + sum.sqr();
        }
        (sum + 1.0).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(if self.hi == 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            });
        }
        let x = Self::from_f64(self.hi.ln());
        x + self * (-x).exp() - 1.0
    }

    /// Returns `(sin x, cos x)`.
    pub fn sin_cos(self) -> (Self, Self) {
        if self.hi == 0.0 {
            return (Self::ZERO, Self::ONE);
        }
        let q = (self / Self::FRAC_PI_2).round();
        let r = self - Self::FRAC_PI_2 * q;
        let qi = (q.hi.rem_euclid(4.0)) as i32;
        let r2 = r.sqr();
        // sin r and cos r by Taylor series on |r| <= pi/4.
        let mut s = r;
        let mut term = r;
        let mut n = 1.0;
        loop {
            term = -term * r2 / ((n + 1.0) * (n + 2.0));
            n += 2.0;
            s += term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        let mut c = Self::ONE;
        let mut term = Self::ONE;
        let mut n = 0.0;
        loop {
            term = -term * r2 / ((n + 1.0) * (n + 2.0));
            n += 2.0;
            c += term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        match qi {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    pub fn atan(self) -> Self {
        let x = Self::from_f64(self.hi.atan());
        let (s, c) = x.sin_cos();
        x + (self * c - s) * c
    }

    /// Four-quadrant arctangent of `self / x`.
    pub fn atan2(self, x: Self) -> Self {
        let y = self;
        if x.hi == 0.0 && y.hi == 0.0 {
            return Self::ZERO;
        }
        let t = Self::from_f64(y.hi.atan2(x.hi));
        let (s, c) = t.sin_cos();
        let r = (x.sqr() + y.sqr()).sqrt();
        // Newton step on sin(t) r - y (or cos(t) r - x, whichever is better conditioned).
        if c.hi.abs() > s.hi.abs() {
            t + (y - r * s) / (r * c)
        } else {
            t - (x - r * c) / (r * s)
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl From<i64> for ExtendedReal {
    fn from(x: i64) -> Self {
        let hi = x as f64;
        let lo = (x - hi as i64) as f64;
        Self::new(hi, lo)
    }
}

impl From<(f64, f64)> for ExtendedReal {
    fn from((hi, lo): (f64, f64)) -> Self {
        Self::new(hi, lo)
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl fmt::Display for ExtendedReal {
    /// Decimal rendering with 32 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_finite() {
            return write!(f, "{}", self.hi);
        }
        if self.hi == 0.0 {
            return write!(f, "0");
        }
        let neg = self.hi < 0.0;
        let mut x = self.abs();
        let mut e = x.hi.log10().floor() as i32;
        x = x / Self::from_f64(10.0).powi(e);
        if x.hi >= 10.0 {
            x = x / 10.0;
            e += 1;
        } else if x.hi < 1.0 {
            x = x * 10.0;
            e -= 1;
        }
        let mut digits = Vec::with_capacity(33);
        for _ in 0..33 {
            let d = x.hi.floor().clamp(0.0, 9.0);
            digits.push(d as u8);
            x = (x - d) * 10.0;
        }
        // Round on the 33rd digit.
        if digits[32] >= 5 {
            let mut i = 31;
            loop {
                if digits[i] < 9 {
                    digits[i] += 1;
                    break;
                }
                digits[i] = 0;
                if i == 0 {
                    digits.insert(0, 1);
                    e += 1;
                    break;
                }
                i -= 1;
            }
        }
        digits.truncate(32);
        let mantissa: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
        write!(
            f,
            "{}{}.{}e{}",
            if neg { "-" } else { "" },
            &mantissa[..1],
            &mantissa[1..],
            e
        )
    }
}

impl Neg for ExtendedReal {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for ExtendedReal {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (h, l) = quick_two_sum(s, e + f);
        Self { hi: h, lo: l }
    }
}

impl Add<f64> for ExtendedReal {
    type Output = Self;
    fn add(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (h, l) = quick_two_sum(s, e + self.lo);
        Self { hi: h, lo: l }
    }
}

impl Sub for ExtendedReal {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Sub<f64> for ExtendedReal {
    type Output = Self;
    fn sub(self, b: f64) -> Self {
        self + (-b)
    }
}

impl Mul for ExtendedReal {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        Self { hi: h, lo: l }
    }
}

impl Mul<f64> for ExtendedReal {
    type Output = Self;
    fn mul(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (h, l) = quick_two_sum(p, e + self.lo * b);
        Self { hi: h, lo: l }
    }
}

impl Div for ExtendedReal {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Self { hi: h, lo: l } + q3
    }
}

impl Div<f64> for ExtendedReal {
    type Output = Self;
    fn div(self, b: f64) -> Self {
        self / Self::from_f64(b)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for ExtendedReal {
            fn $m(&mut self, b: Self) { *self = *self $op b; }
        }
        impl $tr<f64> for ExtendedReal {
            fn $m(&mut self, b: f64) { *self = *self $op b; }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl Sum for ExtendedReal {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

/// Arithmetic operation selector for [`xr_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary function selector for [`xr_elem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElemFn {
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Atan,
}

/// Checked binary arithmetic. Overflow shows up as an infinite `hi` word.
pub fn xr_arith(op: ArithOp, a: ExtendedReal, b: ExtendedReal) -> Result<ExtendedReal> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::DomainError("non-finite operand".into()));
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(Error::DivideByZero);
            }
            a / b
        }
    })
}

/// Checked elementary function evaluation.
pub fn xr_elem(f: ElemFn, a: ExtendedReal) -> Result<ExtendedReal> {
    if !a.is_finite() {
        return Err(Error::DomainError("non-finite operand".into()));
    }
    match f {
        ElemFn::Sqrt if a.hi < 0.0 => Err(Error::DomainError("sqrt of negative value".into())),
        ElemFn::Log if a.hi <= 0.0 => Err(Error::DomainError("log of non-positive value".into())),
        ElemFn::Sqrt => Ok(a.sqrt()),
        ElemFn::Exp => Ok(a.exp()),
        ElemFn::Log => Ok(a.ln()),
        ElemFn::Sin => Ok(a.sin()),
        ElemFn::Cos => Ok(a.cos()),
        ElemFn::Atan => Ok(a.atan()),
    }
}

/// Complex number with [`ExtendedReal`] parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExtendedComplex {
    pub re: ExtendedReal,
    pub im: ExtendedReal,
}

impl ExtendedComplex {
    pub const ZERO: Self = Self {
        re: ExtendedReal::ZERO,
        im: ExtendedReal::ZERO,
    };
    pub const ONE: Self = Self {
        re: ExtendedReal::ONE,
        im: ExtendedReal::ZERO,
    };

    pub fn new(re: ExtendedReal, im: ExtendedReal) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: ExtendedReal) -> Self {
        Self {
            re,
            im: ExtendedReal::ZERO,
        }
    }

    /// `e^{i theta}` at double-word precision.
    pub fn cis(theta: ExtendedReal) -> Self {
        let (s, c) = theta.sin_cos();
        Self { re: c, im: s }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm_sqr(self) -> ExtendedReal {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(self) -> ExtendedReal {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: ExtendedReal) -> Self {
        Self {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn powi(self, n: i64) -> Self {
        let mut base = if n < 0 { Self::ONE / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        Self {
            re: z.re.into(),
            im: z.im.into(),
        }
    }
}

impl From<ExtendedReal> for ExtendedComplex {
    fn from(x: ExtendedReal) -> Self {
        Self::from_real(x)
    }
}

impl Neg for ExtendedComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for ExtendedComplex {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Self {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl Sub for ExtendedComplex {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Self {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl Mul for ExtendedComplex {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Self {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Mul<ExtendedReal> for ExtendedComplex {
    type Output = Self;
    fn mul(self, b: ExtendedReal) -> Self {
        self.scale(b)
    }
}

impl Div for ExtendedComplex {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let d = b.norm_sqr();
        let n = self * b.conj();
        Self {
            re: n.re / d,
            im: n.im / d,
        }
    }
}

impl Div<ExtendedReal> for ExtendedComplex {
    type Output = Self;
    fn div(self, b: ExtendedReal) -> Self {
        Self {
            re: self.re / b,
            im: self.im / b,
        }
    }
}

impl AddAssign for ExtendedComplex {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for ExtendedComplex {
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl Sum for ExtendedComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}
