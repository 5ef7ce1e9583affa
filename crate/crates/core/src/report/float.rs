//! Report floats: a fixed 12-significant-digit decimal for reading and a
//! hexadecimal float string that round-trips the exact bits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    let (lead, e) = match (exp, mant) {
        (0, 0) => return format!("{sign}0x0p+0"),
        (0, _) => (0, -1022),
        _ => (1, exp - 1023),
    };
    let digits = format!("{mant:013x}");
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        format!("{sign}0x{lead}p{e:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{e:+}")
    }
}

pub fn parse_hex(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("not a hexadecimal float: {s:?}"));
    match s {
        "nan" => return Ok(f64::NAN),
        "inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let rest = rest.strip_prefix("0x").ok_or_else(bad)?;
    let (mantissa, exp) = rest.split_once('p').ok_or_else(bad)?;
    let exp: i64 = exp.parse().map_err(|_| bad())?;
    let (lead, frac) = match mantissa.split_once('.') {
        Some((l, f)) => (l, f),
        None => (mantissa, ""),
    };
    if frac.len() > 13 {
        return Err(bad());
    }
    let frac_bits = if frac.is_empty() {
        0
    } else {
        u64::from_str_radix(&format!("{frac:0<13}"), 16).map_err(|_| bad())?
    };
    let sign_bit = if neg { 1u64 << 63 } else { 0 };
    let bits = match lead {
        "0" if frac_bits == 0 => 0,
        "0" if exp == -1022 => frac_bits,
        "1" if (-1022..=1023).contains(&exp) => (((exp + 1023) as u64) << 52) | frac_bits,
        _ => return Err(bad()),
    };
    Ok(f64::from_bits(sign_bit | bits))
}

pub fn format_dec(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format_hex(x)
    }
}

/// A float carried in reports as `{ "dec": …, "hex": … }`.
#[derive(Clone, Copy)]
pub struct RFloat(pub f64);

impl RFloat {
    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<f64> for RFloat {
    fn from(x: f64) -> Self {
        RFloat(x)
    }
}

impl PartialEq for RFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl fmt::Debug for RFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_dec(self.0))
    }
}

impl fmt::Display for RFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_dec(self.0))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    dec: String,
    hex: String,
}

impl Serialize for RFloat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            dec: format_dec(self.0),
            hex: format_hex(self.0),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RFloat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        parse_hex(&w.hex).map(RFloat).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_strings() {
        assert_eq!(format_hex(1.0), "0x1p+0");
        assert_eq!(format_hex(-0.5), "-0x1p-1");
        assert_eq!(format_hex(0.0), "0x0p+0");
        assert_eq!(format_hex(-0.0), "-0x0p+0");
        assert_eq!(format_hex(0.1), "0x1.999999999999ap-4");
        assert_eq!(format_hex(f64::MIN_POSITIVE / 4.0), "0x0.4p-1022");
        assert_eq!(format_dec(31.0 / 32.0), "9.68750000000e-1");
    }

    #[test]
    fn roundtrip() {
        let xs = [
            1.0,
            -3.404173296349,
            f64::MAX,
            f64::MIN_POSITIVE,
            5e-324,
            -0.0,
            1e300,
            std::f64::consts::PI,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ];
        for x in xs {
            let y = parse_hex(&format_hex(x)).unwrap();
            assert_eq!(x.to_bits(), y.to_bits(), "{x}");
        }
        assert!(parse_hex("nan").unwrap().is_nan());
        assert!(parse_hex("0x2p+0").is_err());
        assert!(parse_hex("1.0").is_err());
    }
}
