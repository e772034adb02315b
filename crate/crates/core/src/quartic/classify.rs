//! Fixed loci of the listed Σ6 permutation types on V.
//!
//! For each eigenvalue λ of σ the locus `{x : σ x = λ x} ∩ V` is the
//! intersection of V with a linear space E. With `q = Q|_E` the flags are
//! decided exactly: `E ∩ V ⊆ Z(F)` iff `q | F^4` (q has degree 4), and
//! `E ∩ V` lies in the union of the hyperplanes `x_a + x_b + x_c = 0` iff q
//! is a product of their restrictions.

use serde::Serialize;

use super::algebra::{nullspace, MPoly};
use super::{gradient, quartic_value};
use crate::cyclotomic::CyclotomicNumber as K;
use crate::error::{Error, Result};
use crate::perm::Perm;

/// One representative per classified cycle type.
pub fn listed_representatives() -> Vec<Perm> {
    let c: [&[&[u8]]; 6] = [
        &[&[1, 2]],
        &[&[1, 2], &[3, 4]],
        &[&[1, 2], &[3, 4], &[5, 6]],
        &[&[1, 2, 3]],
        &[&[1, 2, 3], &[4, 5, 6]],
        &[&[1, 2, 3, 4, 5]],
    ];
    c.iter().map(|cs| Perm::from_cycles(6, cs).expect("valid cycles")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Locus {
    Empty,
    /// A single point that is not on V.
    PointOffQuartic {
        point: Vec<String>,
    },
    SingularLocus,
    /// Inside the union of the hyperplanes `x_a + x_b + x_c = 0`.
    ELocus,
    /// A Σ6-translate of `(0 : θ : θ^2 : θ^3 : θ^4 : 1)`.
    ThetaOrbit {
        point: Vec<String>,
    },
    /// Inside the divisor `x_a = x_b` (1-based).
    Divisor {
        a: usize,
        b: usize,
    },
    Other,
}

impl Locus {
    pub fn describe(&self) -> String {
        match self {
            Locus::Empty => "empty".into(),
            Locus::PointOffQuartic { point } => format!("point ({}) not on V", point.join(" : ")),
            Locus::SingularLocus => "contained in Sing V".into(),
            Locus::ELocus => "contained in the image of the E divisors".into(),
            Locus::ThetaOrbit { point } => format!("theta-orbit point ({})", point.join(" : ")),
            Locus::Divisor { a, b } => format!("contained in the divisor x{a}=x{b}"),
            Locus::Other => "unclassified".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedComponent {
    pub lambda: K,
    /// λ = exp(2πi k / r) as (k, r).
    pub lambda_exponent: (u32, u32),
    /// Projective dimension of E; -1 when E = 0.
    pub dimension: i32,
    pub inside_quartic: bool,
    pub in_singular_locus: bool,
    pub in_e_locus: bool,
    pub divisor: Option<(usize, usize)>,
    pub locus: Locus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedLocusReport {
    pub sigma: String,
    pub cycle_type: Vec<usize>,
    pub conductor: u32,
    pub components: Vec<FixedComponent>,
}

const LISTED: [&[usize]; 6] = [&[2, 1, 1, 1, 1], &[2, 2, 1, 1], &[2, 2, 2], &[3, 1, 1, 1], &[3, 3], &[5, 1]];

fn e_hyperplanes() -> Vec<[usize; 3]> {
    // x_a + x_b + x_c and its complement agree up to sign on Σ x = 0
    let mut out = Vec::new();
    for b in 1..6 {
        for c in b + 1..6 {
            out.push([0, b, c]);
        }
    }
    out
}

fn is_theta_like(x: &[K]) -> bool {
    let m = x[0].conductor();
    if !m.is_multiple_of(5) || x.iter().filter(|c| c.is_zero()).count() != 1 {
        return false;
    }
    let nz: Vec<&K> = x.iter().filter(|c| !c.is_zero()).collect();
    let inv = nz[0].inv().expect("nonzero");
    let mut ks: Vec<i64> = Vec::new();
    for c in nz {
        let r = c * &inv;
        match (0..5).find(|&k| K::root_of_unity(m, 5, k).expect("5 | m") == r) {
            Some(k) => ks.push(k),
            None => return false,
        }
    }
    ks.sort_unstable();
    ks == [0, 1, 2, 3, 4]
}

/// Coordinates scaled so the first nonzero one is 1.
fn strings(x: &[K]) -> Vec<String> {
    let lead = x.iter().find(|c| !c.is_zero()).and_then(|c| c.inv().ok());
    x.iter().map(|c| lead.as_ref().map_or_else(|| c.to_string(), |l| (c * l).to_string())).collect()
}

/// Coordinates restricted to E as linear forms in its basis.
fn restricted_coords(basis: &[Vec<K>], m: u32) -> Vec<MPoly> {
    (0..6).map(|i| MPoly::linear(&basis.iter().map(|b| b[i].clone()).collect::<Vec<_>>(), m)).collect()
}

fn restricted_quartic(xs: &[MPoly], m: u32, d: usize) -> (MPoly, Vec<MPoly>) {
    let mut s2 = MPoly::zero(m, d);
    let mut s4 = MPoly::zero(m, d);
    let mut cubes = Vec::new();
    for x in xs {
        let sq = x.mul(x);
        s4 = s4.add(&sq.mul(&sq));
        s2 = s2.add(&sq);
        cubes.push(sq.mul(x));
    }
    let q = s2.mul(&s2).sub(&s4.scale(&K::from_int(m, 4)));
    let grads: Vec<MPoly> = xs
        .iter()
        .zip(&cubes)
        .map(|(x, c)| s2.mul(x).scale(&K::from_int(m, 4)).sub(&c.scale(&K::from_int(m, 16))))
        .collect();
    let diffs = grads[1..].iter().map(|g| g.sub(&grads[0])).collect();
    (q, diffs)
}

fn component(sigma: &Perm, lambda: K, m: u32) -> Result<FixedComponent> {
    let lambda_exponent = lambda.root_of_unity_exponent().expect("eigenvalues are roots of unity");
    let mut rows = vec![vec![K::one(m); 6]];
    for i in 0..6 {
        let mut r = vec![K::zero(m); 6];
        r[i] = K::one(m);
        let j = sigma.apply(i);
        r[j] = &r[j] - &lambda;
        rows.push(r);
    }
    let basis = nullspace(&rows, 6, m);
    let d = basis.len();
    let divisor = (0..6)
        .flat_map(|a| (a + 1..6).map(move |b| (a, b)))
        .find(|&(a, b)| d > 0 && basis.iter().all(|v| v[a] == v[b]))
        .map(|(a, b)| (a + 1, b + 1));
    let mut c = FixedComponent {
        lambda,
        lambda_exponent,
        dimension: d as i32 - 1,
        inside_quartic: false,
        in_singular_locus: false,
        in_e_locus: false,
        divisor,
        locus: Locus::Empty,
    };
    if d == 0 {
        return Ok(c);
    }
    if d == 1 {
        let x = &basis[0];
        if !quartic_value(x).is_zero() {
            c.locus = Locus::PointOffQuartic { point: strings(x) };
            return Ok(c);
        }
        c.inside_quartic = true;
        let g = gradient(x);
        c.in_singular_locus = g.iter().all(|v| v == &g[0]);
        c.in_e_locus = e_hyperplanes().iter().any(|h| h.iter().fold(K::zero(m), |a, &i| &a + &x[i]).is_zero());
        c.locus = if c.in_singular_locus {
            Locus::SingularLocus
        } else if is_theta_like(x) {
            Locus::ThetaOrbit { point: strings(x) }
        } else if c.in_e_locus {
            Locus::ELocus
        } else if let Some((a, b)) = divisor {
            Locus::Divisor { a, b }
        } else {
            Locus::Other
        };
        return Ok(c);
    }
    let xs = restricted_coords(&basis, m);
    let (q, diffs) = restricted_quartic(&xs, m, d);
    let forms: Vec<MPoly> = e_hyperplanes().iter().map(|h| xs[h[0]].add(&xs[h[1]]).add(&xs[h[2]])).collect();
    if q.is_zero() {
        c.inside_quartic = true;
        c.in_singular_locus = diffs.iter().all(|f| f.is_zero());
        c.in_e_locus = forms.iter().any(|f| f.is_zero());
    } else {
        c.in_singular_locus = diffs.iter().all(|f| q.divides(&f.pow(4)));
        let mut rest = q.clone();
        for f in forms.iter().filter(|f| !f.is_zero()) {
            while let Some(r) = rest.div_exact(f) {
                rest = r;
            }
        }
        c.in_e_locus = rest.degree() == 0;
    }
    c.locus = if c.in_singular_locus {
        Locus::SingularLocus
    } else if c.in_e_locus {
        Locus::ELocus
    } else if let Some((a, b)) = divisor {
        Locus::Divisor { a, b }
    } else {
        Locus::Other
    };
    Ok(c)
}

/// Fixed locus of σ on V, one component per eigenvalue λ (λ^k = 1, k the
/// order of σ), computed in Q(ζ_k).
pub fn classify_permutation_fixed_locus(sigma: &Perm) -> Result<FixedLocusReport> {
    let ct = sigma.cycle_type();
    if sigma.degree() != 6 || !LISTED.contains(&ct.as_slice()) {
        return Err(Error::UnlistedType(format!("{ct:?}")));
    }
    let k = sigma.order() as u32;
    let components =
        (0..k).map(|j| component(sigma, K::root_of_unity(k, k, j as i64)?, k)).collect::<Result<Vec<_>>>()?;
    Ok(FixedLocusReport { sigma: sigma.to_string(), cycle_type: ct, conductor: k, components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(r: &FixedLocusReport) -> Vec<String> {
        r.components
            .iter()
            .map(|c| match &c.locus {
                Locus::Divisor { .. } => "divisor".to_string(),
                Locus::PointOffQuartic { .. } => "off".to_string(),
                Locus::ThetaOrbit { .. } => "theta".to_string(),
                l => l.describe(),
            })
            .collect()
    }

    #[test]
    fn listed_cases() {
        let reps = listed_representatives();
        // (1 2)
        let r = classify_permutation_fixed_locus(&reps[0]).unwrap();
        assert_eq!(r.components[0].locus, Locus::Divisor { a: 1, b: 2 });
        assert_eq!(
            r.components[1].locus,
            Locus::PointOffQuartic { point: strings(&[1, -1, 0, 0, 0, 0].map(|x| K::from_int(2, x))) }
        );
        // (1 2)(3 4)
        let r = classify_permutation_fixed_locus(&reps[1]).unwrap();
        assert_eq!(r.components[0].locus, Locus::Divisor { a: 1, b: 2 });
        assert_eq!(r.components[1].locus, Locus::SingularLocus);
        // (1 2)(3 4)(5 6)
        let r = classify_permutation_fixed_locus(&reps[2]).unwrap();
        assert_eq!(r.components[0].locus, Locus::SingularLocus);
        assert_eq!(r.components[1].locus, Locus::ELocus);
        // (1 2 3)
        let r = classify_permutation_fixed_locus(&reps[3]).unwrap();
        assert_eq!(
            kinds(&r),
            ["divisor", "contained in the image of the E divisors", "contained in the image of the E divisors"]
        );
        // (1 2 3)(4 5 6)
        let r = classify_permutation_fixed_locus(&reps[4]).unwrap();
        assert_eq!(
            r.components[0].locus,
            Locus::PointOffQuartic { point: strings(&[1, 1, 1, -1, -1, -1].map(|x| K::from_int(3, x))) }
        );
        assert!(r.components[1..].iter().all(|c| c.locus == Locus::ELocus));
        // (1 2 3 4 5)
        let r = classify_permutation_fixed_locus(&reps[5]).unwrap();
        assert!(matches!(r.components[0].locus, Locus::PointOffQuartic { .. }));
        assert!(r.components[1..].iter().all(|c| matches!(c.locus, Locus::ThetaOrbit { .. })));
    }

    #[test]
    fn unlisted() {
        let p = Perm::from_cycles(6, &[&[1, 2, 3, 4]]).unwrap();
        assert!(matches!(classify_permutation_fixed_locus(&p), Err(Error::UnlistedType(_))));
    }

    #[test]
    fn relabeling_invariance() {
        let tau = Perm::from_cycles(6, &[&[1, 4, 6], &[2, 5]]).unwrap();
        for s in listed_representatives() {
            let c = tau.compose(&s).compose(&tau.inverse());
            assert_eq!(
                kinds(&classify_permutation_fixed_locus(&s).unwrap()),
                kinds(&classify_permutation_fixed_locus(&c).unwrap())
            );
        }
    }
}
