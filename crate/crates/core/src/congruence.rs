//! Level bookkeeping for composite moduli: CRT splitting, p-projections, the
//! layers `K_{i-1}/K_i` of the p-adic kernel filtration, and subdirect
//! subgroup counts at toy levels.
//!
//! `K_j` is the kernel of Sp(4, Z/p^i) -> Sp(4, Z/p^j). For `i >= 2` every
//! element of `K_{i-1}` is `1 + p^{i-1} X` with X in sp(4, F_p), i.e.
//! `X = [[A, B], [C, -A^t]]` with B, C symmetric; the layer coordinates are
//! `(a11, a12, a21, a22, b11, b12, b22, c11, c12, c22)`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::Subgroup;
use crate::error::{Error, Result};
use crate::modular::{check_modulus, crt_pair, gcd, is_prime, mod_inverse, valuation};
use crate::symplectic::{sp4_order, standard_generators, translation, GroupElement};

/// `n = m q` with `q = p^t` the full power of p in n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelSplit {
    pub n: u32,
    pub m: u32,
    pub p: u32,
    pub t: u32,
    pub q: u32,
}

impl LevelSplit {
    pub fn new(n: u32, p: u32) -> Result<Self> {
        check_modulus(n as i64)?;
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if !n.is_multiple_of(p) {
            return Err(Error::InvalidInput(format!("{p} does not divide the level {n}")));
        }
        let t = valuation(n, p, 32);
        let q = p.pow(t);
        Ok(LevelSplit { n, m: n / q, p, t, q })
    }

    /// From an explicit factorization `n = m q`; the factors must be coprime.
    pub fn from_factors(m: u32, q: u32) -> Result<Self> {
        if gcd(m as u64, q as u64) != 1 {
            return Err(Error::NotCoprime(m, q));
        }
        let (p, t) = crate::modular::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let n = m.checked_mul(q).ok_or(Error::ModulusOutOfRange(m as i64 * q as i64))?;
        check_modulus(n as i64)?;
        Ok(LevelSplit { n, m, p, t, q })
    }

    /// `|Sp(4, Z/m)|` and `|Sp(4, Z/q)|`; their product is `|Sp(4, Z/n)|`.
    pub fn component_orders(&self) -> (u128, u128) {
        (sp4_order(self.m), sp4_order(self.q))
    }

    pub fn split(&self, g: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        if g.modulus() != self.n {
            return Err(Error::ModulusMismatch(self.n, g.modulus()));
        }
        Ok((g.reduce_mod(self.m)?, g.reduce_mod(self.q)?))
    }

    pub fn combine(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        if a.modulus() != self.m {
            return Err(Error::ModulusMismatch(self.m, a.modulus()));
        }
        if b.modulus() != self.q {
            return Err(Error::ModulusMismatch(self.q, b.modulus()));
        }
        let (fa, fb) = (a.flat(), b.flat());
        let mut e = [0i64; 16];
        for k in 0..16 {
            e[k] = crt_pair(fa[k] as u64, self.m as u64, fb[k] as u64, self.q as u64)? as i64;
        }
        GroupElement::from_flat(&e, self.n)
    }

    /// Image of H in the p^t component.
    pub fn p_projection(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.level() != self.n {
            return Err(Error::ModulusMismatch(self.n, h.level()));
        }
        let gens = h.generators().iter().map(|g| g.reduce_mod(self.q)).collect::<Result<Vec<_>>>()?;
        Subgroup::new(self.q, gens)
    }

    /// Full preimage of a subgroup of the p^t component.
    pub fn preimage(&self, hp: &Subgroup) -> Result<Subgroup> {
        if hp.level() != self.q {
            return Err(Error::ModulusMismatch(self.q, hp.level()));
        }
        let mut gens = Vec::new();
        for g in hp.generators() {
            gens.push(self.combine(&GroupElement::identity(self.m), g)?);
        }
        if self.m > 1 {
            for g in standard_generators(self.m) {
                gens.push(self.combine(&g, &GroupElement::identity(self.q))?);
            }
        }
        Subgroup::new(self.n, gens)
    }
}

/// `H_p` for the prime p dividing the level of H.
pub fn p_projection(h: &Subgroup, p: u32) -> Result<Subgroup> {
    LevelSplit::new(h.level(), p)?.p_projection(h)
}

/// The layer `K_{i-1}/K_i` of Sp(4, Z/p^i), as F_p^10.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KernelLayer {
    pub p: u32,
    pub i: u32,
}

pub const LAYER_DIM: usize = 10;

impl KernelLayer {
    pub fn new(p: u32, i: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if i < 2 {
            return Err(Error::InvalidInput(format!("layer index {i} is below 2")));
        }
        let n = (p as u64).checked_pow(i).filter(|&n| n <= 255);
        if n.is_none() {
            return Err(Error::CapExceeded(format!("{p}^{i} exceeds the modulus cap 255")));
        }
        Ok(KernelLayer { p, i })
    }

    pub fn level(&self) -> u32 {
        self.p.pow(self.i)
    }

    fn unit(&self) -> u32 {
        self.p.pow(self.i - 1)
    }

    /// Dimension of `{X : X^t J + J X = 0}` over F_p, by row reduction of the
    /// 16 x 16 linear condition.
    pub fn dimension(&self) -> usize {
        let p = self.p;
        let j = |r: usize, c: usize| -> i64 {
            match (r, c) {
                (0, 2) | (1, 3) => 1,
                (2, 0) | (3, 1) => -1,
                _ => 0,
            }
        };
        // (X^t J + J X)_{ab} = Σ_k X_{ka} J_{kb} + J_{ak} X_{kb}
        let mut rows = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                let mut row = vec![0u32; 16];
                for k in 0..4 {
                    row[k * 4 + a] = (row[k * 4 + a] as i64 + j(k, b)).rem_euclid(p as i64) as u32;
                    row[k * 4 + b] = (row[k * 4 + b] as i64 + j(a, k)).rem_euclid(p as i64) as u32;
                }
                rows.push(row);
            }
        }
        16 - rank_mod_p(rows, p)
    }

    /// Coordinates of `k` in `K_{i-1}`.
    pub fn coords(&self, k: &GroupElement) -> Result<[u32; LAYER_DIM]> {
        let (n, u, p) = (self.level(), self.unit(), self.p);
        if k.modulus() != n {
            return Err(Error::ModulusMismatch(n, k.modulus()));
        }
        let mut x = [[0u32; 4]; 4];
        for (a, row) in x.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                let d = (k.entry(a, b) as i64 - (a == b) as i64).rem_euclid(n as i64) as u32;
                if !d.is_multiple_of(u) {
                    return Err(Error::InvalidInput(format!("element is not in K_{}", self.i - 1)));
                }
                *v = d / u % p;
            }
        }
        Ok([x[0][0], x[0][1], x[1][0], x[1][1], x[0][2], x[0][3], x[1][3], x[2][0], x[2][1], x[3][1]])
    }

    /// `1 + p^{i-1} X` for layer coordinates.
    pub fn element(&self, c: &[u32; LAYER_DIM]) -> GroupElement {
        let u = self.unit() as i64;
        let c = c.map(|v| v as i64);
        let x = [
            [c[0], c[1], c[4], c[5]],
            [c[2], c[3], c[5], c[6]],
            [c[7], c[8], -c[0], -c[2]],
            [c[8], c[9], -c[1], -c[3]],
        ];
        let mut rows = [[0i64; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                rows[a][b] = (a == b) as i64 + u * x[a][b];
            }
        }
        GroupElement::new(rows, self.level()).expect("1 + p^{i-1} X is symplectic for i >= 2")
    }
}

fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = mod_inverse(rows[r][col] % p, p).expect("p prime") as u64;
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_multiple_of(p) {
                let f = rows[i][col] as u64 * inv % p as u64;
                for c in 0..ncols {
                    let sub = f * rows[r][c] as u64 % p as u64;
                    rows[i][c] = ((rows[i][c] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
        }
        r += 1;
    }
    r
}

/// Row-echelon span over F_p.
#[derive(Debug, Clone)]
struct Span {
    p: u32,
    rows: Vec<[u32; LAYER_DIM]>,
}

impl Span {
    fn insert(&mut self, v: [u32; LAYER_DIM]) -> bool {
        let p = self.p as u64;
        let mut v = v.map(|x| x as u64 % p);
        for r in &self.rows {
            let lead = r.iter().position(|&x| x != 0).expect("nonzero row");
            if v[lead] != 0 {
                let f = v[lead] * mod_inverse(r[lead], self.p).expect("p prime") as u64 % p;
                for k in 0..LAYER_DIM {
                    v[k] = (v[k] + p - f * r[k] as u64 % p) % p;
                }
            }
        }
        if v.iter().all(|&x| x == 0) {
            return false;
        }
        self.rows.push(v.map(|x| x as u32));
        self.rows.sort_by_key(|r| r.iter().position(|&x| x != 0));
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SpanMode {
    /// Seeded random words in the standard generators as conjugators, until
    /// full rank or the sample budget.
    Sampled,
    /// The span closed under conjugation by the standard generators, which
    /// is the span of all conjugates.
    Closure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelGeneration {
    pub p: u32,
    pub i: u32,
    pub mode: SpanMode,
    pub seed: u64,
    pub layer_dimension: usize,
    pub rank: usize,
    /// Conjugates (sampled mode) or generator applications (closure mode) used.
    pub steps: usize,
    /// Random lifts h of the unit translation mod p tested for
    /// `h^{p^{i-1}} = 1 + p^{i-1} E_13 mod p^i`.
    pub power_trials: usize,
    pub power_failures: usize,
    pub generated: bool,
}

pub const KERNEL_SAMPLE_BUDGET: usize = 4000;
const RANDOM_WORD_LENGTH: usize = 48;

/// Whether the conjugates of `h^{p^{i-1}}` span `K_{i-1}/K_i`.
pub fn verify_kernel_generation(p: u32, i: u32, mode: SpanMode, seed: u64) -> Result<KernelGeneration> {
    let layer = KernelLayer::new(p, i)?;
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    kernel_generation(layer, mode, seed, 32)
}

/// As [`verify_kernel_generation`] without the `p >= 5` precondition, so the
/// small-prime behaviour can be inspected.
pub fn kernel_generation(
    layer: KernelLayer,
    mode: SpanMode,
    seed: u64,
    power_trials: usize,
) -> Result<KernelGeneration> {
    let (p, i, n) = (layer.p, layer.i, layer.level());
    let dim = layer.dimension();
    let hp = translation(layer.unit() as i64, 0, 0, n);
    let mut span = Span { p, rows: Vec::new() };
    span.insert(layer.coords(&hp)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = standard_generators(n);
    let inv: Vec<GroupElement> = gens.iter().map(|g| g.inverse()).collect();
    let random_word = |rng: &mut ChaCha8Rng| {
        let mut g = GroupElement::identity(n);
        for _ in 0..RANDOM_WORD_LENGTH {
            let k = rng.random_range(0..gens.len());
            g = g * if rng.random_bool(0.5) { gens[k] } else { inv[k] };
        }
        g
    };
    let mut steps = 0;
    match mode {
        SpanMode::Sampled => {
            while span.rows.len() < dim && steps < KERNEL_SAMPLE_BUDGET {
                let g = random_word(&mut rng);
                span.insert(layer.coords(&hp.conjugate_by(&g))?);
                steps += 1;
            }
        }
        SpanMode::Closure => {
            let mut k = 0;
            while k < span.rows.len() {
                let v = layer.element(&span.rows[k]);
                for g in &gens {
                    span.insert(layer.coords(&v.conjugate_by(g))?);
                    steps += 1;
                }
                k += 1;
            }
        }
    }
    // h = t k with t the unit translation and k in K_1
    let t = translation(1, 0, 0, n);
    let mut power_failures = 0;
    for _ in 0..power_trials {
        let g = random_word(&mut rng);
        let k = g.pow(g.reduce_mod(p)?.order());
        let h = t * k;
        if h.pow(layer.unit() as u64) != hp {
            power_failures += 1;
        }
    }
    let rank = span.rows.len();
    Ok(KernelGeneration {
        p,
        i,
        mode,
        seed,
        layer_dimension: dim,
        rank,
        steps,
        power_trials,
        power_failures,
        generated: rank == dim,
    })
}

pub const SUBDIRECT_MAX_ORDER: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubdirectCount {
    pub level: u32,
    pub order_a: usize,
    pub order_b: usize,
    /// All subgroups of A x B.
    pub subgroups: usize,
    /// Those projecting onto both A and B.
    pub subdirect: usize,
}

/// Counts subgroups H of `A x B` (A at level m, B at level q, coprime) with
/// both projections surjective: the subgroups of Sp(4, Z/mq) whose component
/// images are exactly A and B.
pub fn subdirect_count(a: &Subgroup, b: &Subgroup) -> Result<SubdirectCount> {
    let split = LevelSplit::from_factors(a.level(), b.level())?;
    let ea = a.closure()?.elements();
    let eb = b.closure()?.elements();
    let n = ea.len() * eb.len();
    if n > SUBDIRECT_MAX_ORDER {
        return Err(Error::CapExceeded(format!("|A x B| = {n} exceeds {SUBDIRECT_MAX_ORDER}")));
    }
    let table = |els: &[GroupElement]| -> Vec<Vec<usize>> {
        let idx: HashMap<GroupElement, usize> = els.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        els.iter().map(|x| els.iter().map(|y| idx[&(*x * *y)]).collect()).collect()
    };
    let (ta, tb) = (table(&ea), table(&eb));
    let (na, nb) = (ea.len(), eb.len());
    let mul = |x: usize, y: usize| ta[x / nb][y / nb] * nb + tb[x % nb][y % nb];
    let id = ea.iter().position(|g| g.is_identity()).expect("identity") * nb
        + eb.iter().position(|g| g.is_identity()).expect("identity");
    let words = n.div_ceil(64);
    let close = |seed: &[u64], extra: usize| -> Vec<u64> {
        let mut set = seed.to_vec();
        let mut elems: Vec<usize> = (0..n).filter(|&x| set[x / 64] >> (x % 64) & 1 == 1).collect();
        let gens: Vec<usize> = elems.iter().copied().chain(std::iter::once(extra)).collect();
        if set[extra / 64] >> (extra % 64) & 1 == 1 {
            return set;
        }
        set[extra / 64] |= 1 << (extra % 64);
        elems.push(extra);
        let mut k = 0;
        while k < elems.len() {
            let x = elems[k];
            for &g in &gens {
                let y = mul(x, g);
                if set[y / 64] >> (y % 64) & 1 == 0 {
                    set[y / 64] |= 1 << (y % 64);
                    elems.push(y);
                }
            }
            k += 1;
        }
        set
    };
    let mut trivial = vec![0u64; words];
    trivial[id / 64] |= 1 << (id % 64);
    let mut all: Vec<Vec<u64>> = vec![trivial.clone()];
    let mut seen: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::from([trivial]);
    let mut k = 0;
    while k < all.len() {
        let h = all[k].clone();
        for x in 0..n {
            if h[x / 64] >> (x % 64) & 1 == 1 {
                continue;
            }
            let j = close(&h, x);
            if seen.insert(j.clone()) {
                all.push(j);
            }
        }
        k += 1;
    }
    let subdirect = all
        .iter()
        .filter(|h| {
            let mut pa = vec![false; na];
            let mut pb = vec![false; nb];
            for x in (0..n).filter(|&x| h[x / 64] >> (x % 64) & 1 == 1) {
                pa[x / nb] = true;
                pb[x % nb] = true;
            }
            pa.iter().all(|&b| b) && pb.iter().all(|&b| b)
        })
        .count();
    Ok(SubdirectCount { level: split.n, order_a: na, order_b: nb, subgroups: all.len(), subdirect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::full_chain;
    use crate::symplectic::phi0;

    #[test]
    fn split_round_trip_and_homomorphism() {
        let s = LevelSplit::new(15, 5).unwrap();
        assert_eq!((s.m, s.q, s.t), (3, 5, 1));
        let (oa, ob) = s.component_orders();
        assert_eq!(oa * ob, sp4_order(15));
        let id = GroupElement::identity(15);
        assert_eq!(s.split(&id).unwrap(), (GroupElement::identity(3), GroupElement::identity(5)));
        let full = full_chain(15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (g, h) = (full.random_element(&mut rng), full.random_element(&mut rng));
            let (g3, g5) = s.split(&g).unwrap();
            assert_eq!(s.combine(&g3, &g5).unwrap(), g);
            let (h3, h5) = s.split(&h).unwrap();
            assert_eq!(s.split(&(g * h)).unwrap(), (g3 * h3, g5 * h5));
        }
        assert_eq!(LevelSplit::from_factors(3, 9), Err(Error::NotCoprime(3, 9)));
        assert!(LevelSplit::new(15, 7).is_err());
    }

    #[test]
    fn projections() {
        let s = LevelSplit::new(15, 5).unwrap();
        let full = s.p_projection(&Subgroup::full(15)).unwrap();
        assert_eq!(full.order().unwrap(), sp4_order(5));
        // elements that are 1 mod 5 project to the trivial group, and 1 mod 3 to everything
        let g5: Vec<GroupElement> =
            standard_generators(3).iter().map(|g| s.combine(g, &GroupElement::identity(5)).unwrap()).collect();
        let h = Subgroup::new(15, g5).unwrap();
        assert_eq!(s.p_projection(&h).unwrap().order().unwrap(), 1);
        let g3: Vec<GroupElement> =
            standard_generators(5).iter().map(|g| s.combine(&GroupElement::identity(3), g).unwrap()).collect();
        let h = Subgroup::new(15, g3).unwrap();
        assert_eq!(s.p_projection(&h).unwrap().order().unwrap(), sp4_order(5));
        // idempotent and containing every generator image
        let h = Subgroup::new(15, vec![phi0(15), translation(1, 2, 0, 15)]).unwrap();
        let hp = s.p_projection(&h).unwrap();
        let again = LevelSplit::new(5, 5).unwrap().p_projection(&hp).unwrap();
        assert_eq!(again.order().unwrap(), hp.order().unwrap());
        for g in h.generators() {
            assert!(hp.contains(&g.reduce_mod(5).unwrap()).unwrap());
        }
        assert!(h.is_subgroup_of(&s.preimage(&hp).unwrap()).unwrap());
    }

    #[test]
    fn layers() {
        for (p, i) in [(2, 2), (3, 2), (5, 2), (7, 2), (3, 3), (2, 4)] {
            let l = KernelLayer::new(p, i).unwrap();
            assert_eq!(l.dimension(), LAYER_DIM, "p={p} i={i}");
        }
        let l = KernelLayer::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let c: [u32; 10] = std::array::from_fn(|_| rng.random_range(0..5));
            assert_eq!(l.coords(&l.element(&c)).unwrap(), c);
        }
        assert!(KernelLayer::new(5, 4).is_err());
        assert!(l.coords(&translation(1, 0, 0, 25)).is_err());
    }

    #[test]
    fn kernel_generation_small_primes() {
        for p in [5, 7] {
            for mode in [SpanMode::Sampled, SpanMode::Closure] {
                let r = verify_kernel_generation(p, 2, mode, 9).unwrap();
                assert!(r.generated, "{r:?}");
                assert_eq!(r.layer_dimension, 10);
                assert_eq!(r.power_failures, 0);
            }
        }
        assert_eq!(verify_kernel_generation(3, 2, SpanMode::Sampled, 0), Err(Error::PrimeTooSmall(3)));
        // at p = 3 the power congruence fails for some lifts
        let r = kernel_generation(KernelLayer::new(3, 2).unwrap(), SpanMode::Closure, 4, 64).unwrap();
        assert!(r.power_failures > 0);
    }

    #[test]
    fn subdirect_klein_four() {
        // A = <phi0, -1> at level 3, B the same at level 5: both Klein four
        // groups, and the subdirect subgroups of V4 x V4 number 1 + 9 + 6 = 16
        let a = Subgroup::new(3, vec![phi0(3), GroupElement::minus_identity(3)]).unwrap();
        let b = Subgroup::new(5, vec![phi0(5), GroupElement::minus_identity(5)]).unwrap();
        let c = subdirect_count(&a, &b).unwrap();
        assert_eq!((c.order_a, c.order_b, c.subgroups, c.subdirect), (4, 4, 67, 16));
    }
}
