//! Ramification invariants of a subgroup H along the boundary strata, index
//! bounds, and checks of the matrix identities behind them.
//!
//! For a Lagrangian plane W with basis (w1, w2) completed to a symplectic
//! frame g, the unipotent radical of its stabilizer is `g u(S) g^{-1}` with
//! `u(S)` the translation by the symmetric matrix S = (s11, s12, s22). The
//! transvection `r_{x w1 + y w2, a}` is `u(a x^2, a x y, a y^2)`, so every
//! ramification group over W is read off from `S_W = {S : g u(S) g^{-1} in H}`.

mod bounds;
mod identities;
mod report;
mod sweep;

use num_rational::Rational64;

use crate::atlas::{complete_isotropic_pair, e_involution, DivisorD, DivisorE, DivisorF, LineLD, TriplePoint};
use crate::chain::{Chain, Subgroup};
use crate::error::{Error, Result};
use crate::howell::Howell;
use crate::modular::{gcd, mod_inverse, prime_power};
use crate::symplectic::{translation, transvection_unchecked, GroupElement, PGroupElement, Vector4};
use crate::toric::{projective_triples, ToricSingularity};

pub use bounds::{bound_check, bound_check_with, BoundValue, BoundVerdict, Family};
pub use identities::{verify_identities, IdentityCheck, IdentityReport};
pub use report::{FamilyMeans, InvolutionRam, LineRam, RamificationReport, TripleRam, VectorRam};
pub use sweep::{random_subgroup, sweep, SweepEntry, SweepReport};

fn same_level(h: &Subgroup, n: u32) -> Result<()> {
    if h.level() != n {
        return Err(Error::ModulusMismatch(h.level(), n));
    }
    Ok(())
}

/// (x^2, x y, y^2) mod n.
pub(crate) fn sym_hat(x: u32, y: u32, n: u32) -> [u32; 3] {
    let (x, y, n) = (x as u64, y as u64, n as u64);
    [(x * x % n) as u32, (x * y % n) as u32, (y * y % n) as u32]
}

/// `S_W` in the coordinates of the frame's first two columns.
pub(crate) fn unipotent_group(chain: &Chain, frame: &GroupElement) -> Howell<3> {
    let n = frame.modulus();
    let finv = frame.inverse();
    let cands: Vec<[u32; 3]> = match prime_power(n) {
        Some((p, t)) => projective_triples(p, t),
        None => (1..n * n * n).map(|c| [c / (n * n), c / n % n, c % n]).collect(),
    };
    let mut gens: Vec<[u32; 3]> = Vec::new();
    let mut span = Howell::new(&[], n);
    for s in cands {
        if span.contains(&s) {
            continue;
        }
        let u = *frame * translation(s[0] as i64, s[1] as i64, s[2] as i64, n) * finv;
        if chain.contains(&u) {
            gens.push(s);
            span = Howell::new(&gens, n);
        }
    }
    span
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse of a 3x3 matrix mod n, if its determinant is a unit.
fn inverse3(m: &[[u32; 3]; 3], n: u32) -> Option<[[u32; 3]; 3]> {
    let a = m.map(|r| r.map(|x| x as i64));
    let d = mod_inverse(det3(&a).rem_euclid(n as i64) as u32, n)? as i64;
    let mut out = [[0u32; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            // adjugate entry (i, j) = cofactor (j, i)
            let r: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            let c: Vec<usize> = (0..3).filter(|&k| k != i).collect();
            let minor = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]];
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            *x = (sign * minor % n as i64 * d).rem_euclid(n as i64) as u32;
        }
    }
    Some(out)
}

/// Rewrites the rows of `s` in the basis given by the rows of `basis`.
pub(crate) fn change_basis(s: &Howell<3>, basis: &[[u32; 3]; 3]) -> Option<Vec<[u32; 3]>> {
    let n = s.modulus() as u64;
    let inv = inverse3(basis, s.modulus())?;
    Some(
        s.rows()
            .iter()
            .map(|r| {
                let mut out = [0u32; 3];
                for (j, o) in out.iter_mut().enumerate() {
                    *o = ((0..3).map(|k| r[k] as u64 * inv[k][j] as u64).sum::<u64>() % n) as u32;
                }
                out
            })
            .collect(),
    )
}

/// `H ∩ Ram_G(l)` as pairs (a, b) with `r_{v1,a} r_{v2,b}`, from `S_W` and the
/// plane coordinates of the two vectors.
pub(crate) fn line_group_from(s: &Howell<3>, c1: (u32, u32), c2: (u32, u32)) -> Howell<2> {
    let n = s.modulus();
    let c3 = ((c1.0 + c2.0) % n, (c1.1 + c2.1) % n);
    let basis = [sym_hat(c1.0, c1.1, n), sym_hat(c2.0, c2.1, n), sym_hat(c3.0, c3.1, n)];
    let rows = change_basis(s, &basis).expect("line vectors form a basis");
    // third coordinate first: rows with it zero span the intersection
    let perm: Vec<[u32; 3]> = rows.iter().map(|r| [r[2], r[0], r[1]]).collect();
    let h = Howell::new(&perm, n);
    let pairs: Vec<[u32; 2]> = h.rows().iter().filter(|r| r[0] == 0).map(|r| [r[1], r[2]]).collect();
    Howell::new(&pairs, n)
}

pub(crate) fn triple_group_from(s: &Howell<3>, coords: [(u32, u32); 3]) -> ToricSingularity {
    let n = s.modulus();
    let basis = coords.map(|(x, y)| sym_hat(x, y, n));
    let rows = change_basis(s, &basis).expect("triple vectors form a basis");
    let w: Vec<[i64; 3]> = rows.iter().map(|r| r.map(|x| x as i64)).collect();
    ToricSingularity::new(n, &w).expect("n >= 1")
}

/// `|H ∩ {r_{v,a}}| / n`, scanning a.
pub fn ram_v(h: &Subgroup, v: &Vector4) -> Result<Rational64> {
    let n = v.modulus();
    same_level(h, n)?;
    if !v.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let chain = h.closure()?;
    let count = (0..n).filter(|&a| chain.contains(&transvection_unchecked(v, a))).count();
    Ok(Rational64::new(count as i64, n as i64))
}

fn contains_pm(chain: &Chain, g: &PGroupElement) -> bool {
    chain.contains(g.rep()) || chain.contains(&-*g.rep())
}

pub fn ram_e(h: &Subgroup, e: &DivisorE) -> Result<u8> {
    same_level(h, e.level())?;
    Ok(contains_pm(h.closure()?, &e_involution(e)) as u8)
}

pub fn ram_f(h: &Subgroup, f: &DivisorF) -> Result<u8> {
    same_level(h, f.level())?;
    Ok(contains_pm(h.closure()?, &f.involution()) as u8)
}

/// `H ∩ Ram_G(l)` as pairs (a, b) meaning `r_{v1,a} r_{v2,b}` for the line's
/// divisors in the order returned by [`LineLD::divisors`].
pub fn line_group(h: &Subgroup, l: &LineLD) -> Result<Howell<2>> {
    same_level(h, l.level())?;
    let (a, b) = l.divisors();
    let frame = complete_isotropic_pair(&a.vector(), &b.vector())
        .ok_or_else(|| Error::InvalidLine("no symplectic frame".into()))?;
    let s = unipotent_group(h.closure()?, &frame);
    Ok(line_group_from(&s, (1, 0), (0, 1)))
}

/// Largest element order in `H ∩ Ram_G(l)`, over n.
pub fn ram_line(h: &Subgroup, l: &LineLD) -> Result<Rational64> {
    let g = line_group(h, l)?;
    Ok(Rational64::new(g.exponent() as i64, l.level() as i64))
}

pub(crate) fn ram_in_side(g: &Howell<2>, side: usize) -> Rational64 {
    // |Ram_H(l)| / (|Ram_H(l) ∩ Ram_G(v_side)| n) = |projection to the other factor| / n
    let n = g.modulus();
    let other = 1 - side;
    let gg = g.rows().iter().fold(n as u64, |acc, r| gcd(acc, r[other] as u64));
    Rational64::new((n as u64 / gg) as i64, n as i64)
}

/// `|Ram_H(l)| / (|Ram_H(l) ∩ Ram_G(v_side)| n)` for `side` one of the line's divisors.
pub fn ram_line_in_divisor(h: &Subgroup, l: &LineLD, side: &DivisorD) -> Result<Rational64> {
    let (a, b) = l.divisors();
    let idx = if *side == a {
        0
    } else if *side == b {
        1
    } else {
        return Err(Error::InvalidLine("divisor is not a side of the line".into()));
    };
    Ok(ram_in_side(&line_group(h, l)?, idx))
}

/// `H ∩ Ram_G(P)` acting diagonally, weights ordered as [`TriplePoint::divisors`].
pub fn triple_group(h: &Subgroup, p: &TriplePoint) -> Result<ToricSingularity> {
    same_level(h, p.level())?;
    let n = p.level();
    let [a, b, c] = p.divisors();
    let frame = complete_isotropic_pair(&a.vector(), &b.vector())
        .ok_or_else(|| Error::InvalidTriple("no symplectic frame".into()))?;
    let s = unipotent_group(h.closure()?, &frame);
    let cv = c.vector();
    let (x, y) = (crate::symplectic::form(&cv, &frame.column(2)), crate::symplectic::form(&cv, &frame.column(3)));
    debug_assert!(x != 0 && y != 0 && (x == 1 || x == n - 1));
    Ok(triple_group_from(&s, [(1, 0), (0, 1), (x, y)]))
}

pub fn delta_at_triple(h: &Subgroup, p: &TriplePoint) -> Result<Rational64> {
    Ok(triple_group(h, p)?.delta())
}

pub fn mult_bound_at_triple(h: &Subgroup, p: &TriplePoint) -> Result<Rational64> {
    Ok(triple_group(h, p)?.mult_upper_bound())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::phi0;

    fn closure(n: u32, gens: Vec<GroupElement>) -> Subgroup {
        Subgroup::new(n, gens).unwrap()
    }

    #[test]
    fn ram_v_examples() {
        let n = 9;
        let g = Subgroup::full(n);
        let c = Subgroup::center(n);
        let v = Vector4::new([1, 2, 0, 5], n);
        assert_eq!(ram_v(&g, &v).unwrap(), Rational64::from_integer(1));
        assert_eq!(ram_v(&c, &v).unwrap(), Rational64::new(1, 9));
        let e2 = Vector4::basis(1, n);
        let h = closure(n, vec![GroupElement::minus_identity(n), transvection_unchecked(&e2, 3)]);
        assert_eq!(ram_v(&h, &e2).unwrap(), Rational64::new(1, 3));
        assert_eq!(ram_v(&h, &-e2).unwrap(), Rational64::new(1, 3));
        assert!(ram_v(&h, &Vector4::new([3, 0, 0, 0], n)).is_err());
    }

    #[test]
    fn ram_e_f_examples() {
        let n = 5;
        let g = Subgroup::full(n);
        let c = Subgroup::center(n);
        assert_eq!(ram_e(&g, &DivisorE::standard(n)).unwrap(), 1);
        assert_eq!(ram_e(&c, &DivisorE::standard(n)).unwrap(), 0);
        assert_eq!(ram_f(&g, &DivisorF::standard(n)).unwrap(), 1);
        assert_eq!(ram_f(&c, &DivisorF::standard(n)).unwrap(), 0);
        let h = closure(n, vec![GroupElement::minus_identity(n), phi0(n)]);
        assert_eq!(ram_e(&h, &DivisorE::standard(n)).unwrap(), 1);
    }

    #[test]
    fn inverse3_works() {
        let m = [[1, 0, 0], [0, 0, 1], [1, 1, 1]];
        let inv = inverse3(&m, 9).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: u32 = (0..3).map(|k| m[i][k] * inv[k][j]).sum::<u32>() % 9;
                assert_eq!(s, (i == j) as u32);
            }
        }
        assert!(inverse3(&[[3, 0, 0], [0, 1, 0], [0, 0, 1]], 9).is_none());
    }

    #[test]
    fn line_examples() {
        let n = 5;
        let l = LineLD::standard(n);
        assert_eq!(ram_line(&Subgroup::full(n), &l).unwrap(), Rational64::from_integer(1));
        assert_eq!(ram_line(&Subgroup::center(n), &l).unwrap(), Rational64::new(1, 5));
        // block element [[1,0,a,0],[0,1,0,c],..] with a = 1, c = 0 is r_{e1,1}
        let h = closure(n, vec![GroupElement::minus_identity(n), translation(1, 0, 0, n)]);
        let d1 = DivisorD::new(Vector4::basis(0, n)).unwrap();
        let d2 = DivisorD::new(Vector4::basis(1, n)).unwrap();
        assert_eq!(ram_line(&h, &l).unwrap(), Rational64::from_integer(1));
        assert_eq!(ram_line_in_divisor(&h, &l, &d2).unwrap(), Rational64::from_integer(1));
        assert_eq!(ram_line_in_divisor(&h, &l, &d1).unwrap(), Rational64::new(1, 5));
    }

    #[test]
    fn triple_examples() {
        let n = 5;
        let p = TriplePoint::standard(n);
        let c = Subgroup::center(n);
        assert_eq!(delta_at_triple(&c, &p).unwrap(), Rational64::new(1, 5));
        assert_eq!(triple_group(&c, &p).unwrap().order(), 1);
        let g = Subgroup::full(n);
        let t = triple_group(&g, &p).unwrap();
        assert_eq!(t.order(), 125);
        assert_eq!(delta_at_triple(&g, &p).unwrap(), Rational64::from_integer(1));
        assert_eq!(mult_bound_at_triple(&g, &p).unwrap(), Rational64::from_integer(1));
    }

    #[test]
    fn triple_weights_match_transvections() {
        // H generated by r_{a,1} r_{b,1} r_{c,1}: cyclic with weights (1,1,1)
        let n = 7;
        let p = TriplePoint::standard(n);
        let [a, b, c] = p.divisors();
        let g = transvection_unchecked(&a.vector(), 1)
            * transvection_unchecked(&b.vector(), 1)
            * transvection_unchecked(&c.vector(), 1);
        let h = closure(n, vec![GroupElement::minus_identity(n), g]);
        let t = triple_group(&h, &p).unwrap();
        assert_eq!(t.order(), 7);
        assert!(t.group().contains(&[1, 1, 1]));
        assert_eq!(t.delta(), Rational64::from_integer(1));
    }

    mod props {
        use super::super::*;
        use crate::atlas::{enumerate_e, enumerate_f, lines, triple_points};
        use crate::chain::full_chain;
        use proptest::prelude::*;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        struct Case {
            n: u32,
            h: Subgroup,
            rng: ChaCha8Rng,
        }

        fn case(n: u32, seed: u64) -> Case {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_subgroup(n, &mut rng).unwrap();
            Case { n, h, rng }
        }

        fn level() -> impl Strategy<Value = u32> {
            prop_oneof![Just(3u32), Just(4), Just(5)]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn conjugation_covariance(n in level(), seed in any::<u64>()) {
                let Case { n, h, mut rng } = case(n, seed);
                let g = full_chain(n).random_element(&mut rng);
                let hg = h.conjugate(&g);
                let ls = lines(n).unwrap();
                let l = ls[rng.random_range(0..ls.len())];
                let v = l.divisors().0.vector();
                prop_assert_eq!(ram_v(&h, &v).unwrap(), ram_v(&hg, &g.apply(&v)).unwrap());
                prop_assert_eq!(ram_line(&h, &l).unwrap(), ram_line(&hg, &l.act(&g)).unwrap());
                let side = l.divisors().1;
                prop_assert_eq!(
                    ram_line_in_divisor(&h, &l, &side).unwrap(),
                    ram_line_in_divisor(&hg, &l.act(&g), &side.act(&g)).unwrap()
                );
                let ts = triple_points(n).unwrap();
                let t = ts[rng.random_range(0..ts.len())];
                prop_assert_eq!(delta_at_triple(&h, &t).unwrap(), delta_at_triple(&hg, &t.act(&g)).unwrap());
                let es = enumerate_e(n).unwrap();
                let e = &es[rng.random_range(0..es.len())];
                prop_assert_eq!(ram_e(&h, e).unwrap(), ram_e(&hg, &e.act(&g)).unwrap());
                let fs = enumerate_f(n).unwrap();
                let f = &fs[rng.random_range(0..fs.len())];
                prop_assert_eq!(ram_f(&h, f).unwrap(), ram_f(&hg, &f.act(&g)).unwrap());
            }

            #[test]
            fn monotone_in_subgroup(n in level(), seed in any::<u64>()) {
                let Case { n, h, mut rng } = case(n, seed);
                let extra = random_subgroup(n, &mut rng).unwrap();
                let mut gens = h.generators().to_vec();
                gens.extend_from_slice(extra.generators());
                let big = Subgroup::new(n, gens).unwrap();
                for l in lines(n).unwrap().iter().take(6) {
                    prop_assert!(ram_line(&h, l).unwrap() <= ram_line(&big, l).unwrap());
                    let v = l.divisors().0.vector();
                    prop_assert!(ram_v(&h, &v).unwrap() <= ram_v(&big, &v).unwrap());
                }
                for t in triple_points(n).unwrap().iter().take(4) {
                    prop_assert!(delta_at_triple(&h, t).unwrap() <= delta_at_triple(&big, t).unwrap());
                }
                for e in enumerate_e(n).unwrap().iter().take(6) {
                    prop_assert!(ram_e(&h, e).unwrap() <= ram_e(&big, e).unwrap());
                }
            }
        }
    }
}
