//! Dense linear algebra and sparse multivariate polynomials over Q(ζ_m).

use std::collections::BTreeMap;

use crate::cyclotomic::CyclotomicNumber as K;

/// Row-reduces in place; returns the pivot columns.
pub(crate) fn rref(rows: &mut [Vec<K>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let sub: Vec<K> = rows[r].iter().map(|x| x * &f).collect();
                rows[i] = rows[i].iter().zip(&sub).map(|(a, b)| a - b).collect();
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Basis of `{u : A u = 0}`.
pub(crate) fn nullspace(a: &[Vec<K>], ncols: usize, m: u32) -> Vec<Vec<K>> {
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![K::zero(m); ncols];
            v[f] = K::one(m);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&rows[i][f];
            }
            v
        })
        .collect()
}

pub(crate) fn rank(a: &[Vec<K>]) -> usize {
    let mut rows = a.to_vec();
    rref(&mut rows).len()
}

pub(crate) fn det(a: &[Vec<K>], m: u32) -> K {
    let n = a.len();
    let mut rows = a.to_vec();
    let mut d = K::one(m);
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !rows[i][col].is_zero()) else {
            return K::zero(m);
        };
        if p != col {
            rows.swap(p, col);
            d = -d;
        }
        d = &d * &rows[col][col];
        let inv = rows[col][col].inv().expect("nonzero pivot");
        for i in col + 1..n {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] * &inv;
            let sub: Vec<K> = rows[col].iter().map(|x| x * &f).collect();
            rows[i] = rows[i].iter().zip(&sub).map(|(a, b)| a - b).collect();
        }
    }
    d
}

/// Coordinates of `v` in the (independent) columns `basis`, if `v` is in their span.
pub(crate) fn coordinates(basis: &[Vec<K>], v: &[K], m: u32) -> Option<Vec<K>> {
    let k = basis.len();
    let mut rows: Vec<Vec<K>> = (0..v.len())
        .map(|i| {
            let mut r: Vec<K> = basis.iter().map(|b| b[i].clone()).collect();
            r.push(v[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut out = vec![K::zero(m); k];
    for (i, &p) in pivots.iter().enumerate() {
        out[p] = rows[i][k].clone();
    }
    Some(out)
}

/// Polynomial in `nvars` variables, terms keyed by exponent vectors. Keys are
/// compared lexicographically, so the last key is the lex-leading monomial.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct MPoly {
    m: u32,
    nvars: usize,
    terms: BTreeMap<Vec<u8>, K>,
}

impl MPoly {
    pub fn zero(m: u32, nvars: usize) -> Self {
        MPoly { m, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: K, nvars: usize) -> Self {
        let mut p = Self::zero(c.conductor(), nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// `Σ coeffs[k] t_k`.
    pub fn linear(coeffs: &[K], m: u32) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(m, n);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[k] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Vec<u8>, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut p = Self::zero(self.m, self.nvars);
        for (e, x) in &self.terms {
            p.add_term(e.clone(), x * c);
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&K::from_int(self.m, -1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.m, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(K::one(self.m), self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// The quotient when `d` divides `self` exactly. A single polynomial is a
    /// Gröbner basis of the ideal it generates, so a leading term that `d`
    /// cannot reduce proves non-divisibility.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (le, lc) = d.terms.iter().next_back()?;
        let lc_inv = lc.inv().expect("nonzero");
        let mut r = self.clone();
        let mut q = Self::zero(self.m, self.nvars);
        while let Some((e, c)) = r.terms.iter().next_back() {
            if e.iter().zip(le).any(|(a, b)| a < b) {
                return None;
            }
            let shift: Vec<u8> = e.iter().zip(le).map(|(a, b)| a - b).collect();
            let coef = c * &lc_inv;
            let mut t = Self::zero(self.m, self.nvars);
            t.add_term(shift, coef);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }
}
