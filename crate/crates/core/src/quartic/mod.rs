//! The Igusa quartic `V: (Σ x_i^2)^2 = 4 Σ x_i^4` inside the hyperplane
//! `Σ x_i = 0` of P^5, with the coordinate action of Σ6.
//!
//! A permutation σ acts by `(σ x)_{σ(i)} = x_i`; it stabilizes the point x
//! with factor λ when `σ x = λ x`, equivalently `x_i = λ x_{σ(i)}`.

mod algebra;
mod classify;
mod expr;
mod involution;

use std::fmt;

use num_rational::{BigRational, Rational64};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cyclotomic::CyclotomicNumber as K;
use crate::error::{Error, Result};
use crate::modular::lcm;
use crate::perm::Perm;

pub use classify::{classify_permutation_fixed_locus, listed_representatives, FixedComponent, FixedLocusReport, Locus};
pub use expr::{parse_expr, parse_point, DEFAULT_CONDUCTOR};
pub use involution::{
    int_is_symplectic, int_mul, int_symplectic_inverse, involution_normal_form, involution_normal_form_strict,
    phi0_int, random_gamma1, stab_ii_relations, IntMatrix, NormalForm, Relation, Side, StabIIReport,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticPoint {
    coords: Vec<K>,
}

impl QuarticPoint {
    /// Six coordinates in one field, summing to zero, not all zero.
    pub fn new(coords: Vec<K>) -> Result<Self> {
        if coords.len() != 6 {
            return Err(Error::InvalidInput(format!("expected 6 coordinates, got {}", coords.len())));
        }
        let m = coords[0].conductor();
        if let Some(c) = coords.iter().find(|c| c.conductor() != m) {
            return Err(Error::FieldMismatch(m, c.conductor()));
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let s = coords.iter().fold(K::zero(m), |a, c| &a + c);
        if !s.is_zero() {
            return Err(Error::InvalidInput(format!("coordinates sum to {s}, not 0")));
        }
        Ok(QuarticPoint { coords })
    }

    pub fn from_ints(m: u32, xs: [i64; 6]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| K::from_int(m, x)).collect())
    }

    /// `(0 : θ : θ^2 : θ^3 : θ^4 : 1)` with θ = exp(2πi/5); needs 5 | m.
    pub fn theta_point(m: u32) -> Result<Self> {
        let mut c = vec![K::zero(m)];
        for k in 1..=5 {
            c.push(K::root_of_unity(m, 5, k)?);
        }
        Self::new(c)
    }

    pub fn conductor(&self) -> u32 {
        self.coords[0].conductor()
    }

    pub fn coords(&self) -> &[K] {
        &self.coords
    }

    /// `σ x`.
    pub fn permuted(&self, sigma: &Perm) -> Vec<K> {
        let mut out = self.coords.clone();
        for (i, c) in self.coords.iter().enumerate() {
            out[sigma.apply(i)] = c.clone();
        }
        out
    }

    /// λ with `σ x = λ x`, if any.
    pub fn proportionality(&self, sigma: &Perm) -> Option<K> {
        let y = self.permuted(sigma);
        let j = self.coords.iter().position(|c| !c.is_zero())?;
        let lambda = y[j].div(&self.coords[j]).ok()?;
        self.coords.iter().zip(&y).all(|(a, b)| &(a * &lambda) == b).then_some(lambda)
    }
}

impl fmt::Display for QuarticPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", s.join(" : "))
    }
}

impl Serialize for QuarticPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(|c| c.to_string()))
    }
}

fn serialize_perm<S: Serializer>(p: &Perm, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerElement {
    #[serde(serialize_with = "serialize_perm")]
    pub sigma: Perm,
    pub lambda: K,
}

fn ri(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `(Σ x^2)^2 - 4 Σ x^4` at a coordinate vector.
pub(crate) fn quartic_value(x: &[K]) -> K {
    let m = x[0].conductor();
    let (mut s2, mut s4) = (K::zero(m), K::zero(m));
    for c in x {
        let sq = c * c;
        s4 = &s4 + &(&sq * &sq);
        s2 = &s2 + &sq;
    }
    &(&s2 * &s2) - &s4.scale(&ri(4))
}

/// Gradient of the quartic form: `4 (Σ x^2) x_i - 16 x_i^3`.
pub(crate) fn gradient(x: &[K]) -> Vec<K> {
    let m = x[0].conductor();
    let s2 = x.iter().fold(K::zero(m), |a, c| &a + &(c * c));
    x.iter().map(|c| &(&s2 * c).scale(&ri(4)) - &(&(c * c) * c).scale(&ri(16))).collect()
}

pub fn on_quartic(x: &QuarticPoint) -> bool {
    quartic_value(&x.coords).is_zero()
}

/// A point of V is singular when the gradient is proportional to (1, ..., 1).
pub fn is_singular(x: &QuarticPoint) -> Result<bool> {
    if !on_quartic(x) {
        return Err(Error::NotOnQuartic);
    }
    let g = gradient(&x.coords);
    Ok(g.iter().all(|c| c == &g[0]))
}

/// All σ in Σ6 with `σ x = λ x`, in lexicographic order of σ.
pub fn stabilizer(x: &QuarticPoint) -> Result<Vec<StabilizerElement>> {
    if !on_quartic(x) {
        return Err(Error::NotOnQuartic);
    }
    Ok(Perm::all(6)
        .into_par_iter()
        .filter_map(|sigma| x.proportionality(&sigma).map(|lambda| StabilizerElement { sigma, lambda }))
        .collect())
}

/// Matrix of `s` on `T_x V = {u : Σ u = 0, ∇Q(x)·u = 0} / <x>`, including the
/// factor λ^{-1} of the projective tangent map.
pub fn tangent_action(x: &QuarticPoint, s: &StabilizerElement) -> Result<Vec<Vec<K>>> {
    let m = x.conductor();
    if s.lambda.conductor() != m {
        return Err(Error::FieldMismatch(m, s.lambda.conductor()));
    }
    if is_singular(x)? {
        return Err(Error::SingularPoint);
    }
    if x.proportionality(&s.sigma).as_ref() != Some(&s.lambda) {
        return Err(Error::NotStabilizing);
    }
    let w = algebra::nullspace(&[vec![K::one(m); 6], gradient(&x.coords)], 6, m);
    if w.len() != 4 {
        return Err(Error::DegenerateTangent(format!("tangent lift has dimension {}", w.len())));
    }
    // basis x, b1, b2, b3 of W
    let mut basis = vec![x.coords.clone()];
    for v in w {
        let mut trial = basis.clone();
        trial.push(v);
        if algebra::rank(&trial) == trial.len() {
            basis = trial;
        }
    }
    if basis.len() != 4 {
        return Err(Error::DegenerateTangent("x is not in the tangent lift".into()));
    }
    let linv = s.lambda.inv()?;
    let mut cols = Vec::with_capacity(3);
    for b in &basis[1..] {
        let img = QuarticPoint { coords: b.clone() }.permuted(&s.sigma);
        let c = algebra::coordinates(&basis, &img, m)
            .ok_or_else(|| Error::DegenerateTangent("permutation does not preserve the tangent lift".into()))?;
        cols.push(c[1..].iter().map(|v| v * &linv).collect::<Vec<K>>());
    }
    Ok((0..3).map(|i| (0..3).map(|j| cols[j][i].clone()).collect()).collect())
}

pub fn tangent_action_determinant(x: &QuarticPoint, s: &StabilizerElement) -> Result<K> {
    Ok(algebra::det(&tangent_action(x, s)?, x.conductor()))
}

/// Eigenvalues exp(2πi a_j / r) of the tangent action, r its order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentWeights {
    pub order: u32,
    pub weights: Vec<u32>,
}

pub fn tangent_weights(x: &QuarticPoint, s: &StabilizerElement) -> Result<TangentWeights> {
    let m = x.conductor();
    let a = tangent_action(x, s)?;
    let id: Vec<Vec<K>> = (0..3).map(|i| (0..3).map(|j| K::from_int(m, (i == j) as i64)).collect()).collect();
    let mul = |p: &Vec<Vec<K>>, q: &Vec<Vec<K>>| -> Vec<Vec<K>> {
        (0..3)
            .map(|i| (0..3).map(|j| (0..3).fold(K::zero(m), |acc, k| &acc + &(&p[i][k] * &q[k][j]))).collect())
            .collect()
    };
    let mut pw = a.clone();
    let mut order = 1u32;
    while pw != id {
        pw = mul(&pw, &a);
        order += 1;
        if order > 720 {
            return Err(Error::DegenerateTangent("tangent action has infinite order".into()));
        }
    }
    let field_roots = if m.is_multiple_of(2) { m } else { 2 * m };
    if field_roots % order != 0 {
        return Err(Error::DegenerateTangent(format!("eigenvalues of order {order} are not in Q(zeta_{m})")));
    }
    let big = field_roots;
    let mut weights = Vec::new();
    for k in 0..order {
        // roots of unity in Q(ζ_m) have order dividing lcm(2, m)
        let e = (k * (big / order)) as i64;
        let z = if m.is_multiple_of(2) {
            K::zeta_power(m, e)
        } else if e % 2 == 0 {
            K::zeta_power(m, e / 2)
        } else {
            -K::zeta_power(m, (e + m as i64) / 2)
        };
        let shifted: Vec<Vec<K>> =
            (0..3).map(|i| (0..3).map(|j| if i == j { &a[i][j] - &z } else { a[i][j].clone() }).collect()).collect();
        let null = 3 - algebra::rank(&shifted);
        weights.extend(std::iter::repeat_n(k, null));
    }
    if weights.len() != 3 {
        return Err(Error::DegenerateTangent("eigenvalues do not account for the tangent space".into()));
    }
    Ok(TangentWeights { order, weights })
}

/// Least age over the non-identity powers of the element with eigenvalues
/// exp(2πi a_j / r_j); None when every power is the identity.
pub fn min_age(weights: &[(u32, u32)]) -> Option<Rational64> {
    let r = weights.iter().fold(1u64, |acc, &(_, rj)| lcm(acc, rj.max(1) as u64));
    (1..r)
        .filter_map(|k| {
            let nums: Vec<Rational64> =
                weights.iter().map(|&(a, rj)| Rational64::new((k * a as u64 % rj as u64) as i64, rj as i64)).collect();
            if nums.iter().all(|x| *x == 0.into()) {
                None
            } else {
                Some(nums.into_iter().sum::<Rational64>())
            }
        })
        .min()
}

/// Reid-Tai: every non-identity power has age at least 1.
pub fn reid_tai(weights: &[(u32, u32)]) -> bool {
    min_age(weights).is_none_or(|a| a >= 1.into())
}

/// Every non-identity power has age above 1.
pub fn reid_tai_terminal(weights: &[(u32, u32)]) -> bool {
    min_age(weights).is_none_or(|a| a > 1.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_cycle_element(x: &QuarticPoint) -> StabilizerElement {
        stabilizer(x)
            .unwrap()
            .into_iter()
            .find(|s| s.sigma.cycle_type() == vec![5, 1] && !s.lambda.is_one())
            .expect("5-cycle in the stabilizer")
    }

    #[test]
    fn membership() {
        let x = QuarticPoint::theta_point(20).unwrap();
        assert!(on_quartic(&x));
        assert!(!on_quartic(&QuarticPoint::from_ints(20, [-1, 1, 0, 0, 0, 0]).unwrap()));
        assert!(!on_quartic(&QuarticPoint::from_ints(20, [1, 1, 1, 1, 1, -5]).unwrap()));
        assert_eq!(QuarticPoint::from_ints(20, [0; 6]), Err(Error::ZeroVector));
        assert!(QuarticPoint::from_ints(20, [1, 0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn theta_point_stabilizer() {
        let x = QuarticPoint::theta_point(20).unwrap();
        let st = stabilizer(&x).unwrap();
        assert!(st.iter().any(|s| s.sigma.is_identity() && s.lambda.is_one()));
        let s = five_cycle_element(&x);
        let (k, mm) = s.lambda.root_of_unity_exponent().unwrap();
        assert_eq!(mm % 5, 0);
        assert_eq!(k as u64 * 5 % mm as u64, 0);
        // closed under composition with multiplying factors
        for a in &st {
            for b in &st {
                let c = a.sigma.compose(&b.sigma);
                let lc = st.iter().find(|t| t.sigma == c).expect("closed");
                assert_eq!(lc.lambda, &a.lambda * &b.lambda);
            }
        }
    }

    #[test]
    fn divisor_point_has_transposition() {
        let x = QuarticPoint::from_ints(20, [1, 1, 2, -4, 3, -3]).unwrap();
        let t = Perm::from_cycles(6, &[&[1, 2]]).unwrap();
        assert!(x.proportionality(&t).unwrap().is_one());
    }

    #[test]
    fn tangent_at_theta_point() {
        let x = QuarticPoint::theta_point(20).unwrap();
        assert!(!is_singular(&x).unwrap());
        let id = StabilizerElement { sigma: Perm::identity(6), lambda: K::one(20) };
        assert!(tangent_action_determinant(&x, &id).unwrap().is_one());
        let s = five_cycle_element(&x);
        let w = tangent_weights(&x, &s).unwrap();
        assert_eq!(w.order, 5);
        let ws: Vec<(u32, u32)> = w.weights.iter().map(|&a| (a, w.order)).collect();
        assert!(reid_tai(&ws));
        assert!(reid_tai_terminal(&ws));
        let d = tangent_action_determinant(&x, &s).unwrap();
        assert!(d.root_of_unity_exponent().is_some());
    }

    #[test]
    fn tangent_determinants_on_rational_points() {
        for xs in [[-5, -2, -2, 3, 3, 3], [-2, -1, -1, 1, 1, 2], [-6, -6, -6, 4, 4, 10]] {
            let x = QuarticPoint::from_ints(20, xs).unwrap();
            assert!(!is_singular(&x).unwrap());
            let st = stabilizer(&x).unwrap();
            assert!(st.len() >= 8);
            for s in &st {
                let d = tangent_action_determinant(&x, s).unwrap();
                assert!(d.root_of_unity_exponent().is_some());
                if s.lambda.is_one() {
                    assert_eq!(d, K::from_int(20, s.sigma.sign() as i64), "{}", s.sigma);
                }
            }
        }
    }

    #[test]
    fn theta_orbit_stabilizers() {
        let x = QuarticPoint::theta_point(20).unwrap();
        for tau in Perm::all(6).into_iter().step_by(37) {
            let y = QuarticPoint::new(x.permuted(&tau)).unwrap();
            let st = stabilizer(&y).unwrap();
            assert_eq!(st.len(), 5);
            for s in &st {
                assert!(tangent_action_determinant(&y, s).unwrap().root_of_unity_exponent().is_some());
            }
        }
    }

    #[test]
    fn ages() {
        // 1/2 (1, 1, 1): age 3/2
        assert_eq!(min_age(&[(1, 2), (1, 2), (1, 2)]), Some(Rational64::new(3, 2)));
        // 1/3 (1, 1, 0): age 2/3, not canonical
        assert!(!reid_tai(&[(1, 3), (1, 3), (0, 3)]));
        // 1/5 (1, 4, 0): ages 1 throughout, canonical but not terminal
        assert!(reid_tai(&[(1, 5), (4, 5), (0, 5)]));
        assert!(!reid_tai_terminal(&[(1, 5), (4, 5), (0, 5)]));
        assert_eq!(min_age(&[(0, 3)]), None);
    }
}
