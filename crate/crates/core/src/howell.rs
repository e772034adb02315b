//! Howell normal form for subgroups of (Z/n)^C.
//!
//! Two generating sets span the same subgroup iff their forms are equal, so
//! the form doubles as a hashable key.

use crate::modular::{egcd, gcd, mod_inverse};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Howell<const C: usize> {
    n: u32,
    rows: Vec<[u32; C]>,
}

fn unit_normalizer(p: u32, n: u32) -> (u32, u32) {
    let g = gcd(p as u64, n as u64) as u32;
    let m = n / g;
    let p1 = (p / g) % m;
    let base = mod_inverse(p1, m).unwrap_or(0);
    let mut u = base;
    while gcd(u as u64, n as u64) != 1 {
        u += m;
    }
    (u % n, g)
}

impl<const C: usize> Howell<C> {
    pub fn new(gens: &[[u32; C]], n: u32) -> Self {
        let n64 = n as u64;
        let mut rows: Vec<[u32; C]> =
            gens.iter().map(|r| r.map(|x| x % n)).filter(|r| r.iter().any(|&x| x != 0)).collect();
        let mut cur = 0;
        for col in 0..C {
            if cur >= rows.len() {
                break;
            }
            for i in cur + 1..rows.len() {
                let b = rows[i][col];
                if b == 0 {
                    continue;
                }
                let a = rows[cur][col];
                let (g, s, t) = egcd(a as i128, b as i128);
                let (ag, bg) = (a as i128 / g, b as i128 / g);
                let (rc, ri) = (rows[cur], rows[i]);
                for j in 0..C {
                    let x = rc[j] as i128;
                    let y = ri[j] as i128;
                    rows[cur][j] = (s * x + t * y).rem_euclid(n as i128) as u32;
                    rows[i][j] = (-bg * x + ag * y).rem_euclid(n as i128) as u32;
                }
            }
            let p = rows[cur][col];
            if p == 0 {
                continue;
            }
            let (u, g) = unit_normalizer(p, n);
            for x in rows[cur].iter_mut() {
                *x = ((*x as u64 * u as u64) % n64) as u32;
            }
            debug_assert_eq!(rows[cur][col], g);
            let pivot = rows[cur];
            for r in rows.iter_mut().take(cur) {
                let q = r[col] / g;
                if q != 0 {
                    for j in 0..C {
                        r[j] = ((r[j] as u64 + (n64 - q as u64) * pivot[j] as u64) % n64) as u32;
                    }
                }
            }
            let mult = n / g;
            let ann = pivot.map(|x| ((x as u64 * mult as u64) % n64) as u32);
            if ann.iter().any(|&x| x != 0) {
                rows.push(ann);
            }
            cur += 1;
        }
        rows.truncate(cur);
        rows.retain(|r| r.iter().any(|&x| x != 0));
        Howell { n, rows }
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> &[[u32; C]] {
        &self.rows
    }

    fn pivot(&self, r: &[u32; C]) -> (usize, u32) {
        r.iter().enumerate().find(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).expect("nonzero row")
    }

    pub fn order(&self) -> u128 {
        self.rows.iter().map(|r| (self.n / self.pivot(r).1) as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, v: &[u32; C]) -> bool {
        let n = self.n as u64;
        let mut v = v.map(|x| x % self.n);
        for r in &self.rows {
            let (c, p) = self.pivot(r);
            if v[c] % p != 0 {
                return false;
            }
            let q = (v[c] / p) as u64;
            for j in 0..C {
                v[j] = ((v[j] as u64 + (n - q) * r[j] as u64) % n) as u32;
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Every element, each exactly once.
    pub fn elements(&self) -> Vec<[u32; C]> {
        let n = self.n as u64;
        let mut out = vec![[0u32; C]];
        for r in &self.rows {
            let (_, p) = self.pivot(r);
            let k = self.n / p;
            let mut next = Vec::with_capacity(out.len() * k as usize);
            for v in &out {
                for c in 0..k as u64 {
                    let mut w = *v;
                    for j in 0..C {
                        w[j] = ((w[j] as u64 + c * r[j] as u64) % n) as u32;
                    }
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    /// Largest additive order of an element.
    pub fn exponent(&self) -> u32 {
        let mut e = 1u64;
        for r in &self.rows {
            let o = self.n as u64 / r.iter().fold(self.n as u64, |g, &x| gcd(g, x as u64));
            e = crate::modular::lcm(e, o);
        }
        e as u32
    }

    pub fn join(&self, other: &Howell<C>) -> Howell<C> {
        let mut g = self.rows.clone();
        g.extend_from_slice(&other.rows);
        Howell::new(&g, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn span<const C: usize>(gens: &[[u32; C]], n: u32) -> BTreeSet<[u32; C]> {
        let mut set = BTreeSet::new();
        set.insert([0u32; C]);
        let mut stack = vec![[0u32; C]];
        while let Some(v) = stack.pop() {
            for g in gens {
                let mut w = v;
                for j in 0..C {
                    w[j] = (w[j] + g[j]) % n;
                }
                if set.insert(w) {
                    stack.push(w);
                }
            }
        }
        set
    }

    fn check<const C: usize>(n: u32, trials: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen: Vec<(BTreeSet<[u32; C]>, Howell<C>)> = Vec::new();
        for _ in 0..trials {
            let k = rng.random_range(0..4);
            let gens: Vec<[u32; C]> = (0..k)
                .map(|_| {
                    let mut r = [0u32; C];
                    for x in r.iter_mut() {
                        // bias toward non-units
                        *x = if rng.random_bool(0.5) {
                            rng.random_range(0..n)
                        } else {
                            rng.random_range(0..4) * (n / 4).max(1) % n
                        };
                    }
                    r
                })
                .collect();
            let h = Howell::new(&gens, n);
            let s = span(&gens, n);
            assert_eq!(h.order(), s.len() as u128, "n={n} gens={gens:?}");
            let el: BTreeSet<_> = h.elements().into_iter().collect();
            assert_eq!(el, s);
            for (s2, h2) in &seen {
                assert_eq!(s2 == &s, h2 == &h, "canonical form mismatch at n={n}");
            }
            seen.push((s, h));
        }
    }

    #[test]
    fn matches_brute_force() {
        for n in [4, 6, 8, 9, 12] {
            check::<2>(n, 60, n as u64);
            check::<3>(n, 40, 100 + n as u64);
        }
        check::<4>(4, 30, 7);
    }

    #[test]
    fn membership() {
        let h = Howell::new(&[[2, 4, 0], [0, 3, 3]], 12);
        for v in span(&[[2, 4, 0], [0, 3, 3]], 12) {
            assert!(h.contains(&v));
        }
        assert!(!h.contains(&[1, 0, 0]));
        assert_eq!(h.exponent(), 12);
    }
}
