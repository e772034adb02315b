//! Exact arithmetic in Q(ζ_m), elements stored as rational polynomials in ζ_m
//! reduced modulo the m-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_CONDUCTOR: u32 = 360;

fn cache() -> &'static Mutex<HashMap<u32, Vec<i64>>> {
    static C: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (constant term first) of the m-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    if let Some(p) = cache().lock().expect("poisoned").get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Φ_d with d | m, d < m
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let q = cyclotomic_polynomial(d);
        num = div_monic(&num, &q);
    }
    cache().lock().expect("poisoned").insert(m, num.clone());
    num
}

fn div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// An element of Q(ζ_m). Binary operations panic if the two conductors
/// differ; use [`CyclotomicNumber::embed`] to move into a common field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    m: u32,
    c: Vec<BigRational>,
}

impl CyclotomicNumber {
    fn check(m: u32) -> Result<()> {
        if m == 0 || m > MAX_CONDUCTOR {
            return Err(Error::InvalidInput(format!("conductor {m} outside 1..={MAX_CONDUCTOR}")));
        }
        Ok(())
    }

    fn degree(m: u32) -> usize {
        cyclotomic_polynomial(m).len() - 1
    }

    pub fn zero(m: u32) -> Self {
        CyclotomicNumber { m, c: vec![BigRational::zero(); Self::degree(m)] }
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(m, BigRational::one())
    }

    pub fn from_int(m: u32, x: i64) -> Self {
        Self::from_rational(m, rat(x))
    }

    pub fn from_rational(m: u32, x: BigRational) -> Self {
        let mut z = Self::zero(m);
        z.c[0] = x;
        z
    }

    /// Builds `Σ coeffs[k] ζ_m^k` for any number of coefficients.
    pub fn from_coeffs(m: u32, coeffs: &[BigRational]) -> Result<Self> {
        Self::check(m)?;
        Ok(Self::reduce(m, coeffs.to_vec()))
    }

    /// ζ_m^k, k taken mod m.
    pub fn zeta_power(m: u32, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        Self::reduce(m, v)
    }

    /// exp(2πi k / order), which lies in Q(ζ_m) when `order` divides m.
    pub fn root_of_unity(m: u32, order: u32, k: i64) -> Result<Self> {
        Self::check(m)?;
        if order == 0 || !m.is_multiple_of(order) {
            return Err(Error::InvalidInput(format!("Q(zeta_{m}) has no primitive {order}-th root of unity")));
        }
        Ok(Self::zeta_power(m, k * (m / order) as i64))
    }

    fn reduce(m: u32, mut v: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(m);
        let d = phi.len() - 1;
        for k in (d..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[k]);
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    v[k - d + j] -= &c * rat(pj);
                }
            }
        }
        v.resize(d, BigRational::zero());
        CyclotomicNumber { m, c: v }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    /// Coefficients on 1, ζ, ..., ζ^{φ(m)-1}.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.c[1..].iter().all(|x| x.is_zero()).then(|| self.c[0].clone())
    }

    /// The same number in Q(ζ_k) for a multiple k of m.
    pub fn embed(&self, k: u32) -> Result<Self> {
        Self::check(k)?;
        if !k.is_multiple_of(self.m) {
            return Err(Error::FieldMismatch(self.m, k));
        }
        let step = (k / self.m) as usize;
        let mut v = vec![BigRational::zero(); step * self.c.len().max(1)];
        for (j, x) in self.c.iter().enumerate() {
            v[j * step] = x.clone();
        }
        Ok(Self::reduce(k, v))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CyclotomicNumber { m: self.m, c: self.c.iter().map(|x| x * r).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid: s a + t Φ = g with g a nonzero constant
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.m).into_iter().map(rat).collect();
        let (mut r0, mut r1) = (phi, trim(self.c.clone()));
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        let g = r1[0].clone();
        let s: Vec<BigRational> = s1.iter().map(|x| x / &g).collect();
        Ok(Self::reduce(self.m, s))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// If this is a root of unity, the pair (k, M) with value exp(2πi k/M),
    /// M = lcm(2, m) and 0 <= k < M.
    pub fn root_of_unity_exponent(&self) -> Option<(u32, u32)> {
        let big = if self.m.is_multiple_of(2) { self.m } else { 2 * self.m };
        (0..self.m as i64).find_map(|k| {
            let z = Self::zeta_power(self.m, k);
            if &z == self {
                Some(((k as u32 * (big / self.m)) % big, big))
            } else if (-z) == *self {
                Some(((k as u32 * (big / self.m) + big / 2) % big, big))
            } else {
                None
            }
        })
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigRational::zero());
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let lead = b.last().expect("nonempty").clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = &r[k + b.len() - 1] / &lead;
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    r.truncate(b.len() - 1);
    (q, trim(r))
}

impl Add<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, o: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.m, o.m, "field mismatch");
        CyclotomicNumber { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, o: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.m, o.m, "field mismatch");
        CyclotomicNumber { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, o: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.m, o.m, "field mismatch");
        CyclotomicNumber::reduce(self.m, poly_mul(&self.c, &o.c))
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber { m: self.m, c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $f(self, o: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for CyclotomicNumber {
    /// Written in the expression grammar with `zeta` = ζ_m, e.g. `1 - 1/2*zeta^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let neg = x.is_negative();
            let a = x.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            match k {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{coef}*")?;
                    }
                    if k == 1 {
                        write!(f, "zeta")?;
                    } else {
                        write!(f, "zeta^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[Q(zeta_{})] {}", self.m, self)
    }
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(20), vec![1, 0, -1, 0, 1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn roots() {
        let m = 20;
        let theta = CyclotomicNumber::root_of_unity(m, 5, 1).unwrap();
        let i = CyclotomicNumber::root_of_unity(m, 4, 1).unwrap();
        assert!(theta.pow(5).unwrap().is_one());
        assert!(!theta.is_one());
        assert_eq!(i.pow(2).unwrap(), CyclotomicNumber::from_int(m, -1));
        let s = (0..5).fold(CyclotomicNumber::zero(m), |acc, k| &acc + &theta.pow(k).unwrap());
        assert!(s.is_zero());
        assert_eq!(theta.root_of_unity_exponent(), Some((4, 20)));
        assert_eq!((-CyclotomicNumber::one(5)).root_of_unity_exponent(), Some((5, 10)));
        assert!(CyclotomicNumber::from_int(m, 2).root_of_unity_exponent().is_none());
    }

    #[test]
    fn embedding() {
        let w = CyclotomicNumber::zeta_power(3, 1);
        let w6 = w.embed(6).unwrap();
        assert!(w6.pow(3).unwrap().is_one());
        assert!(w.embed(4).is_err());
        assert_eq!(CyclotomicNumber::zeta_power(4, 1).embed(20).unwrap(), CyclotomicNumber::zeta_power(20, 5));
    }

    #[test]
    fn display() {
        let x = &CyclotomicNumber::from_int(20, 2) - &CyclotomicNumber::zeta_power(20, 3);
        assert_eq!(x.to_string(), "2 - zeta^3");
        assert_eq!(CyclotomicNumber::zero(7).to_string(), "0");
    }

    fn elem(m: u32) -> impl Strategy<Value = CyclotomicNumber> {
        let d = CyclotomicNumber::degree(m);
        proptest::collection::vec((-9i64..10, 1i64..5), d).prop_map(move |v| {
            let c: Vec<BigRational> = v.into_iter().map(|(a, b)| BigRational::new(a.into(), b.into())).collect();
            CyclotomicNumber::from_coeffs(m, &c).unwrap()
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in elem(20), b in elem(20), c in elem(20)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn inverse_in_odd_field(a in elem(15)) {
            prop_assume!(!a.is_zero());
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }
}
