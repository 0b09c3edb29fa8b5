//! Bit-exact text encodings for floating point data.

use crate::error::{Error, Result};
use crate::highprec::ExtendedReal;

/// Formats an `f64` as a C99-style hexadecimal float, e.g. `0x1.8p+1`.
pub fn f64_to_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, e) = if exp == 0 { (0, -1022) } else { (1, exp - 1023) };
    let mut digits = format!("{frac:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let dot = if digits.is_empty() { String::new() } else { format!(".{digits}") };
    format!("{sign}0x{lead}{dot}p{e:+}")
}

/// Parses the output of [`f64_to_hex`].
pub fn hex_to_f64(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("invalid hex float {s:?}"));
    match s {
        "nan" => return Ok(f64::NAN),
        "inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let body = body.strip_prefix("0x").ok_or_else(bad)?;
    let (mant, exp) = body.split_once('p').ok_or_else(bad)?;
    let e: i64 = exp.parse().map_err(|_| bad())?;
    let (lead, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let lead: u64 = lead.parse().map_err(|_| bad())?;
    if lead > 1 || frac.len() > 13 {
        return Err(bad());
    }
    let frac_bits = if frac.is_empty() {
        0
    } else {
        u64::from_str_radix(frac, 16).map_err(|_| bad())? << (4 * (13 - frac.len()))
    };
    let sign = if neg { 1u64 << 63 } else { 0 };
    let bits = if lead == 0 {
        if frac_bits != 0 && e != -1022 {
            return Err(bad());
        }
        sign | frac_bits
    } else {
        let be = e + 1023;
        if !(1..=2046).contains(&be) {
            return Err(bad());
        }
        sign | ((be as u64) << 52) | frac_bits
    };
    Ok(f64::from_bits(bits))
}

pub fn xr_to_hex(x: ExtendedReal) -> [String; 2] {
    [f64_to_hex(x.hi), f64_to_hex(x.lo)]
}

pub fn hex_to_xr(s: &[String; 2]) -> Result<ExtendedReal> {
    Ok(ExtendedReal { hi: hex_to_f64(&s[0])?, lo: hex_to_f64(&s[1])? })
}

/// Fixed formatting with 17 significant digits, independent of locale.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_encodings() {
        assert_eq!(f64_to_hex(1.0), "0x1p+0");
        assert_eq!(f64_to_hex(3.0), "0x1.8p+1");
        assert_eq!(f64_to_hex(-0.5), "-0x1p-1");
        assert_eq!(f64_to_hex(0.0), "0x0p+0");
        assert_eq!(f64_to_hex(f64::MIN_POSITIVE / 2.0), "0x0.8p-1022");
    }

    #[test]
    fn roundtrip() {
        let vals = [
            1.0,
            -2.5e-300,
            std::f64::consts::PI,
            f64::MAX,
            f64::MIN_POSITIVE,
            5e-324,
            -0.0,
            1.2246467991473532e-16,
        ];
        for v in vals {
            let back = hex_to_f64(&f64_to_hex(v)).unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v}");
        }
        assert!(hex_to_f64("0x2p+0").is_err());
        assert!(hex_to_f64("1.0").is_err());
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(-2.0), "-2.0000000000000000e0");
    }
}
