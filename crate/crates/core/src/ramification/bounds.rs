use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use super::report::RamificationReport;
use crate::atlas::Atlas;
use crate::chain::Subgroup;
use crate::error::{Error, Result};
use crate::modular::prime_power;
use crate::pfloor::p_floor;
use crate::rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    D,
    E,
    DD,
    F,
    DDD,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::D, Family::E, Family::DD, Family::F, Family::DDD];

    /// (a, b, c, d, strict) for `2^a ε^{-b} [2^c ε^{-d}]_p`.
    pub fn constants(self) -> (u32, u32, u32, u32, bool) {
        match self {
            Family::D => (5, 2, 72, 42, true),
            Family::E => (7, 2, 246, 130, true),
            Family::DD => (11, 2, 1020, 350, false),
            Family::F => (13, 2, 1722, 702, false),
            Family::DDD => (69, 34, 11170, 5950, false),
        }
    }

    /// The achieved ε of this family in a report.
    pub fn epsilon(self, r: &RamificationReport) -> Option<Rational64> {
        match self {
            Family::D => Some(r.means.d),
            Family::E => Some(r.means.e),
            Family::DD => Some(r.means.dd),
            Family::F => Some(r.means.f),
            Family::DDD => r.means.ddd,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::D => "D",
            Family::E => "E",
            Family::DD => "DD",
            Family::F => "F",
            Family::DDD => "DDD",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "DD" => Ok(Family::DD),
            "F" => Ok(Family::F),
            "DDD" => Ok(Family::DDD),
            _ => Err(Error::Parse(format!("unknown family {s:?} (expected D, E, DD, F or DDD)"))),
        }
    }
}

/// `2^two_exp ε^{-eps_exp} p^floor_exponent` with `p^floor_exponent = [2^c ε^{-d}]_p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub two_exp: u32,
    pub eps_exp: u32,
    pub p: u32,
    /// Exponent of the largest power of p not above the inner argument; negative
    /// when the argument is below 1.
    pub floor_exponent: i64,
    /// log2 of the whole bound.
    pub log2: f64,
    #[serde(skip)]
    pub exact: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundVerdict {
    pub family: Family,
    #[serde(serialize_with = "rational::serialize")]
    pub epsilon: Rational64,
    pub bound: Option<BoundValue>,
    #[serde(serialize_with = "rational::serialize_u128")]
    pub index: u128,
    pub strict: bool,
    pub satisfied: bool,
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Largest `k` (possibly negative) with `p^k <= x`, for `x > 0`.
fn floor_exponent(x: &BigRational, p: u32) -> Result<i64> {
    if x >= &BigRational::one() {
        return Ok(p_floor(x, p as u64)?.exponent as i64);
    }
    let pb = BigRational::from_integer(BigInt::from(p));
    let mut k = 0i64;
    let mut v = BigRational::one();
    while &v > x {
        v /= &pb;
        k -= 1;
    }
    Ok(k)
}

pub fn bound_value(family: Family, epsilon: Rational64, p: u32) -> Result<BoundValue> {
    let (a, b, c, d, _) = family.constants();
    let inv = big(epsilon).recip();
    let two = BigRational::from_integer(BigInt::from(2));
    let inner = Pow::pow(&two, c) * Pow::pow(&inv, d);
    let k = floor_exponent(&inner, p)?;
    let pk = if k >= 0 {
        BigRational::from_integer(BigInt::from(BigUint::from(p).pow(k as u32)))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(BigUint::from(p).pow((-k) as u32)))
    };
    let exact = Pow::pow(&two, a) * Pow::pow(&inv, b) * pk;
    let eps = epsilon.to_f64().unwrap_or(f64::NAN);
    let log2 = a as f64 - b as f64 * eps.log2() + k as f64 * (p as f64).log2();
    Ok(BoundValue { two_exp: a, eps_exp: b, p, floor_exponent: k, log2, exact })
}

/// Verdict for one family from an existing report.
pub fn bound_check_with(report: &RamificationReport, family: Family) -> Result<BoundVerdict> {
    if !report.contains_center {
        return Err(Error::MissingCenter);
    }
    let (_, _, _, _, strict) = family.constants();
    let epsilon = family.epsilon(report).ok_or_else(|| {
        Error::CapExceeded(format!("exact multiplicities need level <= {}", crate::toric::MULT_EXACT_MAX_N))
    })?;
    if epsilon.is_zero() {
        return Ok(BoundVerdict { family, epsilon, bound: None, index: report.index, strict, satisfied: true });
    }
    let bound = bound_value(family, epsilon, report.prime)?;
    let idx = BigRational::from_integer(BigInt::from(report.index));
    let satisfied = if strict { idx < bound.exact } else { idx <= bound.exact };
    Ok(BoundVerdict { family, epsilon, bound: Some(bound), index: report.index, strict, satisfied })
}

pub fn bound_check(h: &Subgroup, family: Family) -> Result<BoundVerdict> {
    let n = h.level();
    prime_power(n).ok_or(Error::NotPrimePower(n))?;
    if !h.contains_center()? {
        return Err(Error::MissingCenter);
    }
    let atlas = Atlas::new(n)?;
    bound_check_with(&RamificationReport::compute(h, &atlas)?, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{transvection_unchecked, Vector4};

    #[test]
    fn full_group_satisfies_all() {
        let n = 3;
        let atlas = Atlas::new(n).unwrap();
        let r = RamificationReport::compute(&Subgroup::full(n), &atlas).unwrap();
        for fam in Family::ALL {
            let v = bound_check_with(&r, fam).unwrap();
            assert_eq!(v.epsilon, Rational64::from_integer(1));
            assert_eq!(v.index, 1);
            assert!(v.satisfied);
        }
    }

    #[test]
    fn transvections_generate() {
        let n = 3;
        let mut tv = Vec::new();
        for code in 0..81 {
            let v = Vector4::decode(code, n);
            if v.is_primitive() {
                tv.push(transvection_unchecked(&v, 1));
            }
        }
        let h = Subgroup::new(n, tv).unwrap();
        let v = bound_check(&h, Family::D).unwrap();
        assert_eq!((v.epsilon, v.index, v.satisfied), (Rational64::from_integer(1), 1, true));
    }

    #[test]
    fn errors() {
        assert_eq!(bound_check(&Subgroup::trivial(3), Family::D), Err(Error::MissingCenter));
        assert_eq!(bound_check(&Subgroup::center(6), Family::D), Err(Error::NotPrimePower(6)));
        assert_eq!("dd".parse::<Family>().unwrap(), Family::DD);
        assert!("X".parse::<Family>().is_err());
    }

    #[test]
    fn bound_values() {
        // ε = 1: 2^5 [2^72]_2 = 2^77
        let b = bound_value(Family::D, Rational64::from_integer(1), 2).unwrap();
        assert_eq!(b.floor_exponent, 72);
        assert_eq!(b.exact, BigRational::from_integer(BigInt::from(2u8).pow(77u32)));
        let b = bound_value(Family::E, Rational64::new(1, 2), 3).unwrap();
        // [2^246 2^130]_3 = 3^floor(376 / log2 3)
        assert_eq!(b.floor_exponent, (376.0 / 3f64.log2()).floor() as i64);
        // a huge ε pushes the inner argument below 1
        assert!(floor_exponent(&BigRational::new(BigInt::from(1), BigInt::from(10)), 3).unwrap() == -3);
    }
}
