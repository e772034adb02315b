//! Abelian diagonal quotients of affine 3-space: the invariant δ, toric
//! multiplicity, the census over cyclic weights mod p^s, solvable chains and
//! the monomial decomposition check.

mod hull;
mod solvable;

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Pow};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::howell::Howell;
use crate::modular::is_prime;
use crate::pfloor::p_floor;

pub use hull::{hull_facets, pareto_minimal, six_volume, Facet, P3};
pub use solvable::{k_constant, FiniteGroupElement, SolvableChain, MAX_GROUP};

/// Largest modulus accepted by [`ToricSingularity::mult_exact`].
pub const MULT_EXACT_MAX_N: u32 = 32;
/// Largest p^s accepted by [`census`].
pub const CENSUS_MAX: u32 = 1 << 10;
/// Largest (cap+1)^3 table for [`klem_failures`].
pub const KLEM_MAX_TABLE: usize = 1 << 24;

/// H_1 ⊆ (Z/n)^3 acting by x_i -> ζ^{h_i} x_i, stored in Howell form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToricSingularity {
    n: u32,
    group: Howell<3>,
}

impl ToricSingularity {
    pub fn new(n: u32, weights: &[[i64; 3]]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("modulus must be at least 1".into()));
        }
        let rows: Vec<[u32; 3]> = weights.iter().map(|w| w.map(|x| x.rem_euclid(n as i64) as u32)).collect();
        Ok(ToricSingularity { n, group: Howell::new(&rows, n) })
    }

    pub fn trivial(n: u32) -> Self {
        ToricSingularity { n, group: Howell::new(&[], n) }
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    /// Canonical generators (Howell rows).
    pub fn weights(&self) -> &[[u32; 3]] {
        self.group.rows()
    }

    pub fn group(&self) -> &Howell<3> {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.group.order() as u64
    }

    pub fn exponent(&self) -> u32 {
        if self.group.is_trivial() {
            1
        } else {
            self.group.exponent()
        }
    }

    pub fn is_invariant(&self, l: [u64; 3]) -> bool {
        let n = self.n as u64;
        self.group.rows().iter().all(|r| (0..3).map(|i| r[i] as u64 * (l[i] % n)).sum::<u64>() % n == 0)
    }

    /// Least total degree of a nonconstant invariant monomial, by BFS over
    /// the character values of monomials.
    pub fn min_invariant_degree(&self) -> u32 {
        let rows = self.group.rows();
        let n = self.n as u64;
        let steps: Vec<Vec<u32>> = (0..3).map(|i| rows.iter().map(|r| r[i]).collect()).collect();
        let add = |s: &[u32], t: &[u32]| -> Vec<u32> {
            s.iter().zip(t).map(|(a, b)| ((*a as u64 + *b as u64) % n) as u32).collect()
        };
        let zero = vec![0u32; rows.len()];
        let mut dist: HashMap<Vec<u32>, u32> = HashMap::from([(zero.clone(), 0)]);
        let mut queue = VecDeque::from([zero.clone()]);
        let mut best = u32::MAX;
        while let Some(s) = queue.pop_front() {
            let d = dist[&s];
            if d + 1 >= best {
                break;
            }
            for st in &steps {
                let t = add(&s, st);
                if t == zero {
                    best = best.min(d + 1);
                } else if !dist.contains_key(&t) {
                    dist.insert(t.clone(), d + 1);
                    queue.push_back(t);
                }
            }
        }
        best
    }

    /// δ = (least invariant degree) / n.
    pub fn delta(&self) -> Rational64 {
        Rational64::new(self.min_invariant_degree() as i64, self.n as i64)
    }

    /// n^3 δ / |H_1|.
    pub fn mult_upper_bound(&self) -> Rational64 {
        let n = self.n as i64;
        Rational64::new(n * n * self.min_invariant_degree() as i64, self.order() as i64)
    }

    /// Minimal nonzero invariant exponent vectors; all lie in [0, n]^3.
    pub fn semigroup(&self) -> SemigroupK {
        let n = self.n as usize;
        let side = n + 1;
        let idx = |x: usize, y: usize, z: usize| (x * side + y) * side + z;
        let mut has = vec![false; side * side * side];
        let mut gens = Vec::new();
        for x in 0..side {
            for y in 0..side {
                for z in 0..side {
                    let below = (x > 0 && has[idx(x - 1, y, z)])
                        || (y > 0 && has[idx(x, y - 1, z)])
                        || (z > 0 && has[idx(x, y, z - 1)]);
                    let inv = (x, y, z) != (0, 0, 0) && self.is_invariant([x as u64, y as u64, z as u64]);
                    if inv && !below {
                        gens.push([x as u32, y as u32, z as u32]);
                    }
                    has[idx(x, y, z)] = below || inv;
                }
            }
        }
        SemigroupK { n: self.n, generators: gens }
    }

    /// Normalized volume (unit simplex = 1) of the region under the convex
    /// hull of nonzero invariant exponents, divided by |H_1|.
    pub fn mult_exact(&self) -> Result<u64> {
        if self.n > MULT_EXACT_MAX_N {
            return Err(Error::CapExceeded(format!("mult_exact needs n <= {MULT_EXACT_MAX_N}, got {}", self.n)));
        }
        let n = self.n as i64;
        let mut pts: Vec<P3> = Vec::new();
        for g in self.semigroup().generators {
            for mask in 0..8 {
                let mut p = g.map(|x| x as i64);
                for (i, c) in p.iter_mut().enumerate() {
                    if mask >> i & 1 == 1 {
                        *c = n;
                    }
                }
                pts.push(p);
            }
        }
        let facets = hull_facets(&pts, [0, 0, 1]);
        let complement = 6 * (n as i128).pow(3) - six_volume(&facets);
        let ord = self.order() as i128;
        if complement % ord != 0 {
            return Err(Error::NotIntegral(format!("{complement}/{ord}")));
        }
        Ok((complement / ord) as u64)
    }
}

/// Nonzero invariant exponent vectors that are not sums of two such; they
/// generate the monoid of invariant monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupK {
    pub n: u32,
    pub generators: Vec<[u32; 3]>,
}

impl SemigroupK {
    pub fn contains_pure_powers(&self) -> bool {
        (0..3).all(|i| {
            self.generators
                .iter()
                .any(|g| (0..3).all(|j| j == i || g[j] == 0) && g[i] > 0 && self.n.is_multiple_of(g[i]))
        })
    }
}

/// δ for the cyclic group generated by (u, v, w) mod p^s.
pub fn delta_uvw(u: i64, v: i64, w: i64, p: u32, s: u32) -> Result<Rational64> {
    let n = prime_power_modulus(p, s, u32::MAX)?;
    Ok(ToricSingularity::new(n, &[[u, v, w]])?.delta())
}

fn prime_power_modulus(p: u32, s: u32, cap: u32) -> Result<u32> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if s == 0 {
        return Err(Error::InvalidInput("exponent s must be at least 1".into()));
    }
    let n = (p as u64).checked_pow(s).filter(|&n| n <= cap as u64);
    n.map(|n| n as u32).ok_or_else(|| Error::CapExceeded(format!("{p}^{s} exceeds {cap}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub p: u32,
    pub s: u32,
    pub epsilon: Rational64,
    pub count: u64,
    /// 2^2 ε^{-8} [4 ε^{-5}]_p
    pub bound: BigRational,
    pub satisfied: bool,
}

/// Representatives of nonzero (u, v, w) mod p^s up to unit scaling: the first
/// coordinate of least valuation j equals p^j.
pub fn projective_triples(p: u32, s: u32) -> Vec<[u32; 3]> {
    let n = p.pow(s);
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..s {
            let pj = p.pow(j);
            let before: Vec<u32> = (0..n / (pj * p)).map(|k| k * pj * p).collect();
            let after: Vec<u32> = (0..n / pj).map(|k| k * pj).collect();
            let choices: Vec<&Vec<u32>> =
                (0..3).filter(|&k| k != i).map(|k| if k < i { &before } else { &after }).collect();
            for &a in choices[0] {
                for &b in choices[1] {
                    let mut t = [0u32; 3];
                    let others: Vec<usize> = (0..3).filter(|&k| k != i).collect();
                    t[i] = pj;
                    t[others[0]] = a;
                    t[others[1]] = b;
                    out.push(t);
                }
            }
        }
    }
    out
}

pub fn census(p: u32, s: u32, epsilon: Rational64) -> Result<Census> {
    let n = prime_power_modulus(p, s, CENSUS_MAX)?;
    if epsilon <= Rational64::from_integer(0) || epsilon > Rational64::one() {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} outside (0, 1]")));
    }
    let count = projective_triples(p, s)
        .par_iter()
        .filter(|t| {
            let h = ToricSingularity::new(n, &[t.map(|x| x as i64)]).expect("n >= 1");
            h.delta() >= epsilon
        })
        .count() as u64;
    let e = BigRational::new(BigInt::from(*epsilon.numer()), BigInt::from(*epsilon.denom()));
    let inv = e.recip();
    let four = BigRational::from_integer(BigInt::from(4));
    let floor = p_floor(&(&four * Pow::pow(&inv, 5u32)), p as u64)?;
    let bound = four * Pow::pow(&inv, 8u32) * BigRational::from_integer(BigInt::from(floor.value.clone()));
    let satisfied = BigRational::from_integer(BigInt::from(count)) <= bound;
    Ok(Census { p, s, epsilon, count, bound, satisfied })
}

/// Σ_i (j w_i mod r) for j = 1..r-1.
pub fn age_numerators(weights: [u32; 3], r: u32) -> Vec<u32> {
    (1..r).map(|j| weights.iter().map(|w| (j as u64 * *w as u64 % r as u64) as u32).sum()).collect()
}

/// Invariant monomials of degree in [k l + N, cap] that are not a product of
/// at least l nonconstant invariant monomials, k being the exponent of H_1.
pub fn klem_failures(h1: &ToricSingularity, l: u32, n_const: u32, cap: u32) -> Result<Vec<[u32; 3]>> {
    let side = cap as usize + 1;
    if side.checked_pow(3).is_none_or(|t| t > KLEM_MAX_TABLE) {
        return Err(Error::CapExceeded(format!("degree cap {cap} too large")));
    }
    let k = h1.exponent();
    let atoms = h1.semigroup().generators;
    let idx = |x: usize, y: usize, z: usize| (x * side + y) * side + z;
    // most factors in a decomposition into nonconstant invariants, -1 if not invariant
    let mut f = vec![-1i32; side * side * side];
    f[0] = 0;
    let lo = k as u64 * l as u64 + n_const as u64;
    let mut bad = Vec::new();
    for x in 0..side {
        for y in 0..side - x {
            for z in 0..side - x - y {
                if (x, y, z) == (0, 0, 0) {
                    continue;
                }
                let mut best = -1;
                for a in &atoms {
                    let (a0, a1, a2) = (a[0] as usize, a[1] as usize, a[2] as usize);
                    if a0 <= x && a1 <= y && a2 <= z {
                        let r = f[idx(x - a0, y - a1, z - a2)];
                        if r >= 0 {
                            best = best.max(r + 1);
                        }
                    }
                }
                f[idx(x, y, z)] = best;
                let deg = (x + y + z) as u64;
                if best >= 0 && deg >= lo && (best as u32) < l {
                    bad.push([x as u32, y as u32, z as u32]);
                }
            }
        }
    }
    Ok(bad)
}

/// Checks the decomposition up to degree k l + N + 3n.
pub fn verify_klem(h1: &ToricSingularity, l: u32, n_const: u32) -> Result<bool> {
    let cap = h1.exponent() * l + n_const + 3 * h1.modulus();
    Ok(klem_failures(h1, l, n_const, cap)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_min_degree(h: &ToricSingularity) -> u32 {
        let n = h.modulus() as u64;
        let mut best = u32::MAX;
        for x in 0..=n {
            for y in 0..=n {
                for z in 0..=n {
                    if (x, y, z) != (0, 0, 0) && h.is_invariant([x, y, z]) {
                        best = best.min((x + y + z) as u32);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn delta_examples() {
        assert_eq!(ToricSingularity::trivial(7).delta(), Rational64::new(1, 7));
        for n in 1..10u32 {
            let h = ToricSingularity::new(n, &[[1, 1, 1]]).unwrap();
            assert_eq!(h.delta(), Rational64::one());
            let g = ToricSingularity::new(n, &[[1, n as i64 - 1, 0]]).unwrap();
            assert_eq!(g.delta(), Rational64::new(1, n as i64));
        }
        assert_eq!(delta_uvw(1, 1, 1, 2, 3).unwrap(), Rational64::one());
        assert_eq!(delta_uvw(1, 7, 0, 2, 3).unwrap(), Rational64::new(1, 8));
        // all of (Z/n)^3: only pure n-th powers
        let full = ToricSingularity::new(5, &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(full.delta(), Rational64::one());
        assert_eq!(full.mult_upper_bound(), Rational64::one());
    }

    #[test]
    fn delta_matches_scan() {
        let cases: &[(u32, &[[i64; 3]])] = &[
            (6, &[[1, 2, 3]]),
            (8, &[[1, 3, 4], [0, 2, 6]]),
            (9, &[[3, 3, 1]]),
            (12, &[[2, 3, 5], [6, 0, 6]]),
            (7, &[[1, 2, 4]]),
        ];
        for (n, w) in cases {
            let h = ToricSingularity::new(*n, w).unwrap();
            assert_eq!(h.min_invariant_degree(), brute_min_degree(&h), "n={n} w={w:?}");
        }
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(ToricSingularity::trivial(1).mult_upper_bound(), Rational64::one());
        assert_eq!(ToricSingularity::trivial(1).mult_exact().unwrap(), 1);
        assert_eq!(ToricSingularity::trivial(5).mult_exact().unwrap(), 1);
        let z2 = ToricSingularity::new(2, &[[1, 1, 1]]).unwrap();
        assert_eq!(z2.mult_upper_bound(), Rational64::from_integer(4));
        assert_eq!(z2.mult_exact().unwrap(), 4);
        let z3 = ToricSingularity::new(3, &[[1, 2, 0]]).unwrap();
        assert_eq!(z3.mult_upper_bound(), Rational64::from_integer(3));
        // A_2 surface singularity times a line: multiplicity 2
        assert_eq!(z3.mult_exact().unwrap(), 2);
        // 1/3(1,1,1): cone over the twisted cubic, multiplicity 9
        assert_eq!(ToricSingularity::new(3, &[[1, 1, 1]]).unwrap().mult_exact().unwrap(), 9);
        assert!(ToricSingularity::trivial(33).mult_exact().is_err());
    }

    #[test]
    fn semigroup_has_pure_powers() {
        let h = ToricSingularity::new(6, &[[1, 2, 3]]).unwrap();
        let k = h.semigroup();
        assert!(k.contains_pure_powers());
        assert!(k.generators.iter().all(|g| h.is_invariant(g.map(|x| x as u64))));
    }

    #[test]
    fn census_small() {
        let c = census(3, 2, Rational64::new(1, 2)).unwrap();
        assert!(c.satisfied);
        assert!(c.count > 0);
        assert!(census(4, 2, Rational64::new(1, 2)).is_err());
        assert!(census(2, 11, Rational64::new(1, 2)).is_err());
    }

    #[test]
    fn projective_triples_count() {
        // brute force over all nonzero triples modulo unit scaling
        for (p, s) in [(2u32, 3u32), (3, 2), (5, 1)] {
            let n = p.pow(s);
            let units: Vec<u32> = (1..n).filter(|u| u % p != 0).collect();
            let mut classes = std::collections::BTreeSet::new();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if (a, b, c) == (0, 0, 0) {
                            continue;
                        }
                        let m = units.iter().map(|u| [a * u % n, b * u % n, c * u % n]).min().unwrap();
                        classes.insert(m);
                    }
                }
            }
            let reps = projective_triples(p, s);
            assert_eq!(reps.len(), classes.len());
            let canon: std::collections::BTreeSet<_> = reps
                .iter()
                .map(|t| units.iter().map(|u| [t[0] * u % n, t[1] * u % n, t[2] * u % n]).min().unwrap())
                .collect();
            assert_eq!(canon, classes);
        }
    }

    #[test]
    fn klem() {
        let z2 = ToricSingularity::new(2, &[[1, 1, 1]]).unwrap();
        assert!(verify_klem(&z2, 2, 6).unwrap());
        assert!(klem_failures(&z2, 3, 0, 14).unwrap().is_empty());
        let z3 = ToricSingularity::new(3, &[[1, 1, 1]]).unwrap();
        assert!(verify_klem(&z3, 3, 9).unwrap());
    }

    #[test]
    fn ages() {
        assert_eq!(age_numerators([1, 1, 1], 3), vec![3, 6]);
        assert_eq!(age_numerators([1, 2, 4], 7), vec![7, 7, 14, 7, 14, 14]);
    }

    mod props {
        use super::super::*;
        use crate::quartic::min_age;
        use proptest::prelude::*;

        fn permute(w: &[[i64; 3]], pi: [usize; 3]) -> Vec<[i64; 3]> {
            w.iter().map(|r| [r[pi[0]], r[pi[1]], r[pi[2]]]).collect()
        }

        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

        fn weights(n: i64, k: usize) -> impl Strategy<Value = Vec<[i64; 3]>> {
            proptest::collection::vec(proptest::array::uniform3(0..n), 1..=k)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn delta_antitone((n, w, extra) in (2i64..=12).prop_flat_map(|n| (Just(n), weights(n, 2), proptest::array::uniform3(0..n)))) {
                let small = ToricSingularity::new(n as u32, &w).unwrap();
                let mut w2 = w.clone();
                w2.push(extra);
                let big = ToricSingularity::new(n as u32, &w2).unwrap();
                prop_assert!(small.delta() <= big.delta());
            }

            #[test]
            fn mult_below_bound((n, w) in (1i64..=10).prop_flat_map(|n| (Just(n), weights(n, 2)))) {
                let h = ToricSingularity::new(n as u32, &w).unwrap();
                let m = h.mult_exact().unwrap();
                prop_assert!(Rational64::from_integer(m as i64) <= h.mult_upper_bound());
                prop_assert!(m >= 1);
            }

            #[test]
            fn permutation_invariance((n, w, k) in (2i64..=9).prop_flat_map(|n| (Just(n), weights(n, 2), 0usize..6))) {
                let a = ToricSingularity::new(n as u32, &w).unwrap();
                let b = ToricSingularity::new(n as u32, &permute(&w, PERMS[k])).unwrap();
                prop_assert_eq!(a.delta(), b.delta());
                prop_assert_eq!(a.order(), b.order());
                prop_assert_eq!(a.mult_exact().unwrap(), b.mult_exact().unwrap());
            }

            #[test]
            fn delta_uvw_symmetries(
                (p, s) in prop_oneof![Just((2u32, 3u32)), Just((3, 2)), Just((5, 2)), Just((7, 1))],
                u in 0i64..49, v in 0i64..49, w in 0i64..49, unit in 1i64..49, k in 0usize..6,
            ) {
                prop_assume!(unit % p as i64 != 0);
                let base = delta_uvw(u, v, w, p, s).unwrap();
                let t = [u, v, w];
                let pi = PERMS[k];
                prop_assert_eq!(delta_uvw(t[pi[0]], t[pi[1]], t[pi[2]], p, s).unwrap(), base);
                prop_assert_eq!(delta_uvw(u * unit, v * unit, w * unit, p, s).unwrap(), base);
            }

            #[test]
            fn ages_agree_with_min_age(r in 2u32..30, w in proptest::array::uniform3(0u32..30)) {
                let w = w.map(|x| x % r);
                let least = age_numerators(w, r).into_iter().filter(|&a| a > 0).min();
                let expect = least.map(|a| Rational64::new(a as i64, r as i64));
                prop_assert_eq!(min_age(&[(w[0], r), (w[1], r), (w[2], r)]), expect);
            }
        }
    }
}
