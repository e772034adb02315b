//! Integral normal form of involutions in Γ(2), and the stabilizer of the
//! point diag(i, i).

use std::collections::HashSet;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modular::egcd;

pub type IntMatrix = [[i64; 4]; 4];

const ID: IntMatrix = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
/// The coordinate swap (1 2)(3 4), symplectic.
const SWAP: IntMatrix = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];

pub fn phi0_int() -> IntMatrix {
    [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]
}

fn too_big() -> Error {
    Error::InvalidInput("integer entries overflow".into())
}

pub fn int_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let s: i128 = (0..4).map(|k| a[i][k] as i128 * b[k][j] as i128).sum();
            out[i][j] = i64::try_from(s).map_err(|_| too_big())?;
        }
    }
    Ok(out)
}

fn neg(a: &IntMatrix) -> IntMatrix {
    a.map(|r| r.map(|x| -x))
}

fn apply(a: &IntMatrix, v: &[i64; 4]) -> Result<[i64; 4]> {
    let mut out = [0i64; 4];
    for (i, o) in out.iter_mut().enumerate() {
        let s: i128 = (0..4).map(|k| a[i][k] as i128 * v[k] as i128).sum();
        *o = i64::try_from(s).map_err(|_| too_big())?;
    }
    Ok(out)
}

fn form(x: &[i64; 4], y: &[i64; 4]) -> i128 {
    let (x, y) = (x.map(|v| v as i128), y.map(|v| v as i128));
    x[0] * y[2] + x[1] * y[3] - x[2] * y[0] - x[3] * y[1]
}

/// `[[A, B], [C, D]] -> [[D^t, -B^t], [-C^t, A^t]]`.
pub fn int_symplectic_inverse(m: &IntMatrix) -> IntMatrix {
    let mut out = [[0i64; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = m[j + 2][i + 2];
            out[i][j + 2] = -m[j][i + 2];
            out[i + 2][j] = -m[j + 2][i];
            out[i + 2][j + 2] = m[j][i];
        }
    }
    out
}

pub fn int_is_symplectic(m: &IntMatrix) -> bool {
    int_mul(m, &int_symplectic_inverse(m)).is_ok_and(|p| p == ID)
}

/// A random element of Sp(4, Z): a word of `steps` generators, each a
/// translation by a symmetric matrix with entries in -2..=2, its transpose,
/// or the standard J.
pub fn random_gamma1<R: Rng>(rng: &mut R, steps: usize) -> IntMatrix {
    let j: IntMatrix = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]];
    let mut g = ID;
    for _ in 0..steps {
        let (a, b, c) = (rng.random_range(-2..=2), rng.random_range(-2..=2), rng.random_range(-2..=2));
        let t: IntMatrix = [[1, 0, a, b], [0, 1, b, c], [0, 0, 1, 0], [0, 0, 0, 1]];
        let x = match rng.random_range(0..3) {
            0 => t,
            1 => [[1, 0, 0, 0], [0, 1, 0, 0], [a, b, 1, 0], [b, c, 0, 1]],
            _ => j,
        };
        g = int_mul(&g, &x).expect("small words do not overflow");
    }
    g
}

/// How one eigen-pair was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "route", rename_all = "kebab-case")]
pub enum Side {
    /// Bézout construction with `d = gcd(b/2, (a1-1)/2, a3/2)` and
    /// `alpha b/2 + beta (a1-1)/2 - gamma a3/2 = d`.
    Bezout { d: i64, alpha: i64, beta: i64, gamma: i64 },
    /// `d = 0`, so `b = a3 = 0`, `a1 = 1`; basis `(1,0,0,-c/2), (0,0,1,a2/2)`.
    DegenerateGcd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    /// e1, e2, e3, e4 with `M e_i = (-1)^{i+1} e_i`, `<e1,e3> = <e2,e4> = 1`.
    pub basis: [[i64; 4]; 4],
    /// Columns e1..e4; `P^{-1} M P = φ0`.
    pub conjugator: IntMatrix,
    /// Routes for (e1, e3) and (e2, e4).
    pub sides: [Side; 2],
}

/// e1, e3 in Ker(M - 1) with `<e1, e3> = 1`, M in the involution shape.
fn half_basis(m: &IntMatrix, strict: bool) -> Result<([i64; 4], [i64; 4], Side)> {
    let (a1, a2, b, a3, c) = (m[0][0] as i128, m[0][1] as i128, m[0][3] as i128, m[1][0] as i128, m[2][1] as i128);
    let (x, y, z) = (b / 2, (a1 - 1) / 2, -a3 / 2);
    let (g1, s1, t1) = egcd(x, y);
    let (d, s2, t2) = egcd(g1, z);
    let cvt = |v: [i128; 4]| -> Result<[i64; 4]> {
        let mut o = [0i64; 4];
        for (k, x) in v.iter().enumerate() {
            o[k] = i64::try_from(*x).map_err(|_| too_big())?;
        }
        Ok(o)
    };
    if d == 0 {
        if strict {
            return Err(Error::DegenerateGcd);
        }
        return Ok((cvt([1, 0, 0, -c / 2])?, cvt([0, 0, 1, a2 / 2])?, Side::DegenerateGcd));
    }
    let (al, be, ga) = (s2 * s1, s2 * t1, t2);
    let e1 = [b / (2 * d), 0, a3 / (2 * d), (1 - a1) / (2 * d)];
    let v1 = [0, -b / 2, (a1 + 1) / 2, a2 / 2];
    let v2 = [a2 / 2, (1 - a1) / 2, c / 2, 0];
    let v3 = [(a1 + 1) / 2, a3 / 2, 0, -c / 2];
    let e3: [i128; 4] = std::array::from_fn(|k| al * v1[k] + be * v2[k] + ga * v3[k]);
    let side = Side::Bezout {
        d: i64::try_from(d).map_err(|_| too_big())?,
        alpha: i64::try_from(al).map_err(|_| too_big())?,
        beta: i64::try_from(be).map_err(|_| too_big())?,
        gamma: i64::try_from(ga).map_err(|_| too_big())?,
    };
    Ok((cvt(e1)?, cvt(e3)?, side))
}

fn check_shape(m: &IntMatrix) -> Result<()> {
    let bad = |s: &str| Err(Error::NotInvolution(s.into()));
    if !int_is_symplectic(m) {
        return bad("not symplectic over Z");
    }
    for (i, r) in m.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            if (x - (i == j) as i64).rem_euclid(2) != 0 {
                return bad("not congruent to 1 mod 2");
            }
        }
    }
    if int_mul(m, m)? != ID {
        return bad("square is not 1");
    }
    if *m == ID || *m == neg(&ID) {
        return bad("matrix is +-1");
    }
    // M^2 = 1 and M symplectic give A = D^t, B = -B^t, C = -C^t; M != +-1 then
    // forces a1 + a4 = 0
    let (a1, a2, a3, b, c) = (m[0][0], m[0][1], m[1][0], m[0][3], m[2][1]);
    let shape = [[a1, a2, 0, b], [a3, -a1, -b, 0], [0, c, a1, a3], [-c, 0, a2, -a1]];
    if *m != shape {
        return bad("not of the shape [[a1,a2,0,b],[a3,-a1,-b,0],[0,c,a1,a3],[-c,0,a2,-a1]]");
    }
    Ok(())
}

fn normal_form(m: &IntMatrix, strict: bool) -> Result<NormalForm> {
    check_shape(m)?;
    let (e1, e3, s1) = half_basis(m, strict)?;
    // Ker(M + 1) = SWAP Ker(-SWAP M SWAP - 1)
    let other = neg(&int_mul(&int_mul(&SWAP, m)?, &SWAP)?);
    let (f1, f3, s2) = half_basis(&other, strict)?;
    let (e2, e4) = (apply(&SWAP, &f1)?, apply(&SWAP, &f3)?);
    let basis = [e1, e2, e3, e4];
    let mut p = [[0i64; 4]; 4];
    for (j, e) in basis.iter().enumerate() {
        for i in 0..4 {
            p[i][j] = e[i];
        }
    }
    let ok = apply(m, &e1)? == e1
        && apply(m, &e3)? == e3
        && apply(m, &e2)? == e2.map(|x| -x)
        && apply(m, &e4)? == e4.map(|x| -x)
        && form(&e1, &e3) == 1
        && form(&e2, &e4) == 1
        && int_is_symplectic(&p)
        && int_mul(&int_mul(&int_symplectic_inverse(&p), m)?, &p)? == phi0_int();
    if !ok {
        return Err(Error::NotInvolution("constructed basis failed verification".into()));
    }
    Ok(NormalForm { basis, conjugator: p, sides: [s1, s2] })
}

/// Symplectic basis of eigenvectors for an involution M ≡ 1 mod 2, M ≠ ±1.
pub fn involution_normal_form(m: &IntMatrix) -> Result<NormalForm> {
    normal_form(m, false)
}

/// As [`involution_normal_form`], but a zero gcd is an error.
pub fn involution_normal_form_strict(m: &IntMatrix) -> Result<NormalForm> {
    normal_form(m, true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub name: String,
    pub exact: bool,
    pub up_to_sign: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabIIReport {
    pub phi: IntMatrix,
    pub alpha: IntMatrix,
    pub beta: IntMatrix,
    pub relations: Vec<Relation>,
    /// Order of <φ, α, β> modulo ±1.
    pub order_mod_sign: usize,
    pub abelian: bool,
}

impl StabIIReport {
    /// All relations hold modulo ±1, the group has order 16 and is not abelian.
    pub fn holds(&self) -> bool {
        self.relations.iter().all(|r| r.up_to_sign) && self.order_mod_sign == 16 && !self.abelian
    }
}

fn canon(m: &IntMatrix) -> IntMatrix {
    let first = m.iter().flatten().find(|&&x| x != 0).copied().unwrap_or(1);
    if first < 0 {
        neg(m)
    } else {
        *m
    }
}

pub fn stab_ii_relations() -> StabIIReport {
    let phi: IntMatrix = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
    let alpha: IntMatrix = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]];
    let beta: IntMatrix = [[0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1]];
    let mul = |a: &IntMatrix, b: &IntMatrix| int_mul(a, b).expect("small");
    let pow = |a: &IntMatrix, k: usize| (0..k).fold(ID, |acc, _| mul(&acc, a));
    let pairs: [(&str, IntMatrix, IntMatrix); 6] = [
        ("alpha beta = beta alpha", mul(&alpha, &beta), mul(&beta, &alpha)),
        ("alpha^2 = beta^2", pow(&alpha, 2), pow(&beta, 2)),
        ("phi alpha = beta phi", mul(&phi, &alpha), mul(&beta, &phi)),
        ("phi^2 = 1", pow(&phi, 2), ID),
        ("alpha^4 = 1", pow(&alpha, 4), ID),
        ("beta^4 = 1", pow(&beta, 4), ID),
    ];
    let relations = pairs
        .iter()
        .map(|(name, l, r)| Relation { name: name.to_string(), exact: l == r, up_to_sign: canon(l) == canon(r) })
        .collect();
    let gens = [phi, alpha, beta];
    let mut seen: HashSet<IntMatrix> = HashSet::from([ID]);
    let mut frontier = vec![ID];
    while let Some(g) = frontier.pop() {
        for s in &gens {
            let h = canon(&mul(&g, s));
            if seen.insert(h) {
                frontier.push(h);
            }
        }
    }
    let elems: Vec<IntMatrix> = seen.iter().copied().collect();
    let abelian = elems.iter().all(|a| elems.iter().all(|b| canon(&mul(a, b)) == canon(&mul(b, a))));
    StabIIReport { phi, alpha, beta, relations, order_mod_sign: seen.len(), abelian }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn phi0_gives_standard_basis() {
        let nf = involution_normal_form(&phi0_int()).unwrap();
        assert_eq!(nf.conjugator, ID);
        assert_eq!(nf.sides[0], Side::DegenerateGcd);
        assert_eq!(involution_normal_form_strict(&phi0_int()), Err(Error::DegenerateGcd));
    }

    #[test]
    fn random_conjugates_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut bezout = 0;
        for k in 0..400 {
            let g = random_gamma1(&mut rng, 6);
            assert!(int_is_symplectic(&g));
            let mut m = int_mul(&int_mul(&g, &phi0_int()).unwrap(), &int_symplectic_inverse(&g)).unwrap();
            if k % 2 == 1 {
                m = neg(&m);
            }
            let nf = involution_normal_form(&m).unwrap();
            let back = int_mul(&int_mul(&int_symplectic_inverse(&nf.conjugator), &m).unwrap(), &nf.conjugator).unwrap();
            assert_eq!(back, phi0_int());
            bezout += nf.sides.iter().filter(|s| matches!(s, Side::Bezout { .. })).count();
        }
        assert!(bezout > 400);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(involution_normal_form(&ID).is_err());
        let t: IntMatrix = [[1, 0, 2, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        assert!(matches!(involution_normal_form(&t), Err(Error::NotInvolution(_))));
        let j: IntMatrix = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]];
        assert!(involution_normal_form(&j).is_err());
    }

    #[test]
    fn stabilizer_of_i_i() {
        let r = stab_ii_relations();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.order_mod_sign, 16);
        assert!(!r.abelian);
        assert!(r.relations.iter().any(|x| !x.exact));
    }
}
