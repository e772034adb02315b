//! Rational numbers as "num/den" strings.

use num_rational::Rational64;
use serde::Serializer;

use crate::error::{Error, Result};

pub fn to_string(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses "p/q", an integer, or a decimal such as "0.25".
pub fn parse(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational64::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let i: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let num = i.abs() * den + f;
        return Ok(Rational64::new(if neg { -num } else { num }, den));
    }
    s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad())
}

pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(r))
}

pub fn serialize_u128<S: Serializer>(x: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
