use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::modular::is_prime;

/// Largest power of a prime not exceeding a rational, `[x]_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPowerFloor {
    pub p: u64,
    pub exponent: u64,
    pub value: BigUint,
}

pub fn p_floor(x: &BigRational, p: u64) -> Result<PPowerFloor> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x < &BigRational::one() {
        return Err(Error::BelowOne(x.to_string()));
    }
    // p^t <= x  iff  p^t <= floor(x)
    let q = x.floor().numer().abs().to_biguint().expect("nonnegative");
    let pb = BigUint::from(p);
    let bits = q.bits();
    let mut t = ((bits.saturating_sub(1)) as f64 / (p as f64).log2()).floor() as u64;
    let mut v = pb.pow(t as u32);
    while v > q {
        t -= 1;
        v /= &pb;
    }
    loop {
        let next = &v * &pb;
        if next > q {
            break;
        }
        v = next;
        t += 1;
    }
    Ok(PPowerFloor { p, exponent: t, value: v })
}

impl PPowerFloor {
    pub fn as_f64_log2(&self) -> f64 {
        self.exponent as f64 * (self.p as f64).log2()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_values() {
        assert_eq!(p_floor(&rat(1, 1), 7).unwrap().value, BigUint::from(1u32));
        assert_eq!(p_floor(&rat(10, 1), 3).unwrap().value, BigUint::from(9u32));
        assert_eq!(p_floor(&rat(9, 1), 3).unwrap().exponent, 2);
        assert_eq!(p_floor(&rat(26, 3), 3).unwrap().value, BigUint::from(3u32));
        assert!(p_floor(&rat(1, 2), 3).is_err());
        assert!(p_floor(&rat(5, 1), 4).is_err());
    }

    #[test]
    fn exact_large_power() {
        let x = BigRational::from_integer(BigInt::from(2).pow(72));
        let f = p_floor(&x, 2).unwrap();
        assert_eq!(f.exponent, 72);
        let y = x - rat(1, 1);
        assert_eq!(p_floor(&y, 2).unwrap().exponent, 71);
    }

    #[test]
    fn brute_force_scan() {
        for p in [2u64, 3, 5, 7] {
            for n in 1..2000i64 {
                let f = p_floor(&rat(n, 1), p).unwrap();
                let mut best = 1i64;
                while best * p as i64 <= n {
                    best *= p as i64;
                }
                assert_eq!(f.value, BigUint::from(best as u64));
            }
        }
    }
}
