//! Residues, vectors and symplectic matrices over Z/n.
//!
//! The skew form is `<x,y> = x1 y3 + x2 y4 - x3 y1 - x4 y2`, and the
//! transvection along `v` is `w -> w + alpha <v,w> v`, so that for
//! `v = (x,y,0,0)` the upper-right block of `r_{v,1}` is `[[x^2,xy],[xy,y^2]]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{check_modulus, gcd, mod_inverse, reduce};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    value: u32,
    modulus: u32,
}

impl Residue {
    pub fn new(value: i64, modulus: u32) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Residue { value: reduce(value, modulus), modulus }
    }

    pub fn zero(modulus: u32) -> Self {
        Residue::new(0, modulus)
    }

    pub fn one(modulus: u32) -> Self {
        Residue::new(1, modulus)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value as u64, self.modulus as u64) == 1
    }

    pub fn inverse(self) -> Option<Residue> {
        mod_inverse(self.value, self.modulus).map(|v| Residue { value: v, modulus: self.modulus })
    }

    /// Additive order, `n / gcd(value, n)`.
    pub fn order(self) -> u32 {
        self.modulus / gcd(self.value as u64, self.modulus as u64) as u32
    }

    pub fn checked_add(self, o: Residue) -> Result<Residue> {
        self.same(o)?;
        Ok(self + o)
    }

    pub fn checked_mul(self, o: Residue) -> Result<Residue> {
        self.same(o)?;
        Ok(self * o)
    }

    fn same(self, o: Residue) -> Result<()> {
        if self.modulus != o.modulus {
            return Err(Error::ModulusMismatch(self.modulus, o.modulus));
        }
        Ok(())
    }
}

// Operator impls panic on mismatched moduli; use the checked variants on untrusted input.
impl Add for Residue {
    type Output = Residue;
    fn add(self, o: Residue) -> Residue {
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
        Residue { value: ((self.value as u64 + o.value as u64) % self.modulus as u64) as u32, modulus: self.modulus }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, o: Residue) -> Residue {
        self + (-o)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, o: Residue) -> Residue {
        assert_eq!(self.modulus, o.modulus, "modulus mismatch");
        Residue { value: ((self.value as u64 * o.value as u64) % self.modulus as u64) as u32, modulus: self.modulus }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector4 {
    c: [u8; 4],
    n: u32,
}

impl Vector4 {
    pub fn new(coords: [i64; 4], n: u32) -> Self {
        assert!((1..=255).contains(&n), "modulus out of range");
        Vector4 { c: coords.map(|x| reduce(x, n) as u8), n }
    }

    pub fn try_new(coords: [i64; 4], n: i64) -> Result<Self> {
        let n = check_modulus(n)?;
        Ok(Vector4::new(coords, n))
    }

    pub fn from_residues(r: [Residue; 4]) -> Result<Self> {
        let n = r[0].modulus();
        for x in &r[1..] {
            if x.modulus() != n {
                return Err(Error::ModulusMismatch(n, x.modulus()));
            }
        }
        Ok(Vector4 { c: r.map(|x| x.value() as u8), n })
    }

    pub fn zero(n: u32) -> Self {
        Vector4 { c: [0; 4], n }
    }

    /// Standard basis vector `e_{i+1}`.
    pub fn basis(i: usize, n: u32) -> Self {
        let mut c = [0u8; 4];
        c[i] = (1 % n) as u8;
        Vector4 { c, n }
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn get(&self, i: usize) -> u32 {
        self.c[i] as u32
    }

    pub fn coords(&self) -> [u32; 4] {
        self.c.map(|x| x as u32)
    }

    pub fn residue(&self, i: usize) -> Residue {
        Residue { value: self.c[i] as u32, modulus: self.n }
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0; 4]
    }

    /// Additive order of the vector.
    pub fn order(&self) -> u32 {
        let g = self.c.iter().fold(self.n as u64, |g, &x| gcd(g, x as u64));
        self.n / g as u32
    }

    /// Order exactly n.
    pub fn is_primitive(&self) -> bool {
        self.order() == self.n
    }

    pub fn scale(&self, a: u32) -> Self {
        let n = self.n;
        Vector4 { c: self.c.map(|x| ((x as u32 * a) % n) as u8), n }
    }

    /// The lexicographically smaller of `v` and `-v`.
    pub fn canonical_pm(&self) -> Self {
        let m = -*self;
        if m.c < self.c {
            m
        } else {
            *self
        }
    }

    /// Mixed-radix code in `0..n^4`.
    pub fn encode(&self) -> u32 {
        let n = self.n;
        self.c[0] as u32 + n * (self.c[1] as u32 + n * (self.c[2] as u32 + n * self.c[3] as u32))
    }

    pub fn decode(mut code: u32, n: u32) -> Self {
        let mut c = [0u8; 4];
        for x in c.iter_mut() {
            *x = (code % n) as u8;
            code /= n;
        }
        Vector4 { c, n }
    }

    /// `v^T J`, so that `<v,w> = (v^T J) . w`.
    pub fn form_row(&self) -> [u32; 4] {
        let n = self.n;
        let neg = |x: u8| (n - x as u32) % n;
        [neg(self.c[2]), neg(self.c[3]), self.c[0] as u32, self.c[1] as u32]
    }
}

impl Add for Vector4 {
    type Output = Vector4;
    fn add(self, o: Vector4) -> Vector4 {
        assert_eq!(self.n, o.n, "modulus mismatch");
        let n = self.n;
        let mut c = [0u8; 4];
        for i in 0..4 {
            c[i] = ((self.c[i] as u32 + o.c[i] as u32) % n) as u8;
        }
        Vector4 { c, n }
    }
}

impl Neg for Vector4 {
    type Output = Vector4;
    fn neg(self) -> Vector4 {
        let n = self.n;
        Vector4 { c: self.c.map(|x| ((n - x as u32) % n) as u8), n }
    }
}

impl Sub for Vector4 {
    type Output = Vector4;
    fn sub(self, o: Vector4) -> Vector4 {
        self + (-o)
    }
}

impl fmt::Display for Vector4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

/// Unchecked skew form on vectors of the same modulus.
pub(crate) fn form(u: &Vector4, v: &Vector4) -> u32 {
    let n = u.n;
    let pos = u.c[0] as u32 * v.c[2] as u32 + u.c[1] as u32 * v.c[3] as u32;
    let neg = u.c[2] as u32 * v.c[0] as u32 + u.c[3] as u32 * v.c[1] as u32;
    ((pos % n) + n - (neg % n)) % n
}

pub fn skew_form(u: &Vector4, v: &Vector4) -> Result<Residue> {
    if u.n != v.n {
        return Err(Error::ModulusMismatch(u.n, v.n));
    }
    Ok(Residue { value: form(u, v), modulus: u.n })
}

/// True iff `A B^t = B A^t`, `C D^t = D C^t` and `A D^t - B C^t = 1` mod n.
pub fn is_symplectic(m: &[[i64; 4]; 4], n: u32) -> bool {
    if n == 0 {
        return false;
    }
    let n = n as i128;
    let blk = |r: usize, c: usize| -> [[i128; 2]; 2] {
        [[m[r][c] as i128, m[r][c + 1] as i128], [m[r + 1][c] as i128, m[r + 1][c + 1] as i128]]
    };
    let (a, b, c, d) = (blk(0, 0), blk(0, 2), blk(2, 0), blk(2, 2));
    // X Y^t
    let xyt = |x: &[[i128; 2]; 2], y: &[[i128; 2]; 2]| {
        let mut r = [[0i128; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = x[i][0] * y[j][0] + x[i][1] * y[j][1];
            }
        }
        r
    };
    let abt = xyt(&a, &b);
    let bat = xyt(&b, &a);
    let cdt = xyt(&c, &d);
    let dct = xyt(&d, &c);
    let adt = xyt(&a, &d);
    let bct = xyt(&b, &c);
    for i in 0..2 {
        for j in 0..2 {
            if (abt[i][j] - bat[i][j]).rem_euclid(n) != 0 {
                return false;
            }
            if (cdt[i][j] - dct[i][j]).rem_euclid(n) != 0 {
                return false;
            }
            let id = if i == j { 1 } else { 0 };
            if (adt[i][j] - bct[i][j] - id).rem_euclid(n) != 0 {
                return false;
            }
        }
    }
    true
}

/// An element of Sp(4, Z/n), entries row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    e: [u8; 16],
    n: u32,
}

impl GroupElement {
    pub fn new(rows: [[i64; 4]; 4], n: u32) -> Result<Self> {
        let n = check_modulus(n as i64)?;
        if !is_symplectic(&rows, n) {
            return Err(Error::NotSymplectic(n));
        }
        Ok(Self::from_rows_unchecked(rows, n))
    }

    pub fn from_flat(entries: &[i64; 16], n: u32) -> Result<Self> {
        let mut rows = [[0i64; 4]; 4];
        for i in 0..4 {
            rows[i].copy_from_slice(&entries[4 * i..4 * i + 4]);
        }
        Self::new(rows, n)
    }

    pub(crate) fn from_rows_unchecked(rows: [[i64; 4]; 4], n: u32) -> Self {
        let mut e = [0u8; 16];
        for i in 0..4 {
            for j in 0..4 {
                e[4 * i + j] = reduce(rows[i][j], n) as u8;
            }
        }
        GroupElement { e, n }
    }

    pub fn identity(n: u32) -> Self {
        let mut e = [0u8; 16];
        for i in 0..4 {
            e[5 * i] = (1 % n) as u8;
        }
        GroupElement { e, n }
    }

    pub fn minus_identity(n: u32) -> Self {
        -Self::identity(n)
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.e[4 * i + j] as u32
    }

    pub fn flat(&self) -> [u32; 16] {
        self.e.map(|x| x as u32)
    }

    pub fn rows(&self) -> [[i64; 4]; 4] {
        let mut r = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                r[i][j] = self.e[4 * i + j] as i64;
            }
        }
        r
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_pm_identity(&self) -> bool {
        self.is_identity() || (-*self).is_identity()
    }

    pub fn apply(&self, v: &Vector4) -> Vector4 {
        assert_eq!(self.n, v.n, "modulus mismatch");
        let n = self.n;
        let mut c = [0u8; 4];
        for i in 0..4 {
            let mut s = 0u32;
            for k in 0..4 {
                s += self.e[4 * i + k] as u32 * v.c[k] as u32;
            }
            c[i] = (s % n) as u8;
        }
        Vector4 { c, n }
    }

    /// Image of the coded point `code` (see [`Vector4::encode`]).
    pub(crate) fn apply_code(&self, code: u32) -> u32 {
        self.apply(&Vector4::decode(code, self.n)).encode()
    }

    pub fn column(&self, j: usize) -> Vector4 {
        Vector4 { c: [self.e[j], self.e[4 + j], self.e[8 + j], self.e[12 + j]], n: self.n }
    }

    /// Build from column vectors.
    pub fn from_columns(cols: [Vector4; 4]) -> Result<Self> {
        let n = cols[0].n;
        let mut rows = [[0i64; 4]; 4];
        for (j, c) in cols.iter().enumerate() {
            if c.n != n {
                return Err(Error::ModulusMismatch(n, c.n));
            }
            for i in 0..4 {
                rows[i][j] = c.c[i] as i64;
            }
        }
        Self::new(rows, n)
    }

    /// Symplectic inverse `[[D^t, -B^t], [-C^t, A^t]]`.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let g = |i: usize, j: usize| self.e[4 * i + j] as u32;
        let neg = |x: u32| ((n - x % n) % n) as u8;
        let mut e = [0u8; 16];
        for i in 0..2 {
            for j in 0..2 {
                e[4 * i + j] = g(2 + j, 2 + i) as u8;
                e[4 * i + j + 2] = neg(g(j, 2 + i));
                e[4 * (i + 2) + j] = neg(g(2 + j, i));
                e[4 * (i + 2) + j + 2] = g(j, i) as u8;
            }
        }
        GroupElement { e, n }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// `g self g^{-1}`.
    pub fn conjugate_by(&self, g: &GroupElement) -> Self {
        *g * *self * g.inverse()
    }

    /// Multiplicative order (finite since the group is finite).
    pub fn order(&self) -> u64 {
        let id = Self::identity(self.n);
        let mut x = *self;
        let mut k = 1;
        while x != id {
            x = x * *self;
            k += 1;
        }
        k
    }

    /// Reduce entries modulo a divisor of the level.
    pub fn reduce_mod(&self, m: u32) -> Result<Self> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::ModulusMismatch(self.n, m));
        }
        Ok(GroupElement { e: self.e.map(|x| (x as u32 % m) as u8), n: m })
    }

    pub fn checked_mul(&self, o: &GroupElement) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::ModulusMismatch(self.n, o.n));
        }
        Ok(*self * *o)
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, o: GroupElement) -> GroupElement {
        assert_eq!(self.n, o.n, "modulus mismatch");
        let n = self.n;
        let mut e = [0u8; 16];
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0u32;
                for k in 0..4 {
                    s += self.e[4 * i + k] as u32 * o.e[4 * k + j] as u32;
                }
                e[4 * i + j] = (s % n) as u8;
            }
        }
        GroupElement { e, n }
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        let n = self.n;
        GroupElement { e: self.e.map(|x| ((n - x as u32) % n) as u8), n }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..4 {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} {} {} {}", self.e[4 * i], self.e[4 * i + 1], self.e[4 * i + 2], self.e[4 * i + 3])?;
        }
        write!(f, "] mod {}", self.n)
    }
}

/// Class of an element modulo `{1, -1}`, stored as the lexicographically
/// smaller of the two sign choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PGroupElement(GroupElement);

impl PGroupElement {
    pub fn new(g: GroupElement) -> Self {
        let m = -g;
        PGroupElement(if m.e < g.e { m } else { g })
    }

    pub fn rep(&self) -> &GroupElement {
        &self.0
    }

    pub fn modulus(&self) -> u32 {
        self.0.n
    }
}

impl From<GroupElement> for PGroupElement {
    fn from(g: GroupElement) -> Self {
        PGroupElement::new(g)
    }
}

/// `r_{v,alpha}: w -> w + alpha <v,w> v`.
pub fn transvection(v: &Vector4, alpha: Residue) -> Result<GroupElement> {
    if v.n != alpha.modulus() {
        return Err(Error::ModulusMismatch(v.n, alpha.modulus()));
    }
    if !v.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    Ok(transvection_unchecked(v, alpha.value()))
}

pub(crate) fn transvection_unchecked(v: &Vector4, alpha: u32) -> GroupElement {
    let n = v.n;
    let row = v.form_row();
    let mut e = GroupElement::identity(n).e;
    for i in 0..4 {
        let av = alpha * v.c[i] as u32 % n;
        for j in 0..4 {
            e[4 * i + j] = ((e[4 * i + j] as u32 + av * row[j]) % n) as u8;
        }
    }
    GroupElement { e, n }
}

/// `[[1, S], [0, 1]]` with `S = [[s11, s12], [s12, s22]]`.
pub fn translation(s11: i64, s12: i64, s22: i64, n: u32) -> GroupElement {
    GroupElement::from_rows_unchecked([[1, 0, s11, s12], [0, 1, s12, s22], [0, 0, 1, 0], [0, 0, 0, 1]], n)
}

/// `[[U, 0], [0, U^{-t}]]`; `U` must be invertible mod n.
pub fn block_diag(u: [[i64; 2]; 2], n: u32) -> Result<GroupElement> {
    let det = reduce(u[0][0] * u[1][1] - u[0][1] * u[1][0], n);
    let di = mod_inverse(det, n).ok_or(Error::NotSymplectic(n))? as i64;
    // U^{-t} = det^{-1} [[d, -c], [-b, a]]
    let w = [[di * u[1][1], -di * u[1][0]], [-di * u[0][1], di * u[0][0]]];
    Ok(GroupElement::from_rows_unchecked(
        [[u[0][0], u[0][1], 0, 0], [u[1][0], u[1][1], 0, 0], [0, 0, w[0][0], w[0][1]], [0, 0, w[1][0], w[1][1]]],
        n,
    ))
}

/// `J = [[0, 1], [-1, 0]]` in 2x2 blocks.
pub fn j_matrix(n: u32) -> GroupElement {
    GroupElement::from_rows_unchecked([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], n)
}

/// `diag(1,-1,1,-1)`, the involution attached to the standard E pair.
pub fn phi0(n: u32) -> GroupElement {
    GroupElement::from_rows_unchecked([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]], n)
}

/// Swap of the two symplectic coordinate pairs, the standard F involution.
pub fn psi0(n: u32) -> GroupElement {
    GroupElement::from_rows_unchecked([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], n)
}

/// `psi_b`: the F involutions through the standard line.
pub fn psi_b(b: i64, n: u32) -> GroupElement {
    GroupElement::from_rows_unchecked([[0, 1, 0, b], [1, 0, -b, 0], [0, 0, 0, 1], [0, 0, 1, 0]], n)
}

/// Generating set of Sp(4, Z/n): three elementary translations, `J`, and one
/// block-diagonal shear.
pub fn standard_generators(n: u32) -> Vec<GroupElement> {
    vec![
        translation(1, 0, 0, n),
        translation(0, 0, 1, n),
        translation(0, 1, 0, n),
        j_matrix(n),
        block_diag([[1, 1], [0, 1]], n).expect("unimodular"),
    ]
}

/// Order of Sp(4, Z/n): `n^10 prod_{p|n} (1 - p^-2)(1 - p^-4)`.
pub fn sp4_order(n: u32) -> u128 {
    let mut r = (n as u128).pow(10);
    for (p, _) in crate::modular::factorize(n as u64) {
        let p = p as u128;
        r = r / (p * p) * (p * p - 1);
        r = r / (p.pow(4)) * (p.pow(4) - 1);
    }
    r
}
