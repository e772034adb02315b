use std::collections::HashMap;
use std::sync::Mutex;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use super::{contains_pm, line_group_from, ram_in_side, sym_hat, triple_group_from, unipotent_group};
use crate::atlas::{e_involution, Atlas};
use crate::chain::{full_chain, Subgroup};
use crate::error::{Error, Result};
use crate::howell::Howell;
use crate::modular::prime_power;
use crate::rational;
use crate::toric::{ToricSingularity, MULT_EXACT_MAX_N};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VectorRam {
    pub vector: [u32; 4],
    #[serde(serialize_with = "rational::serialize")]
    pub ram: Rational64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InvolutionRam {
    /// Lex-least of the two signed matrices, row-major.
    pub involution: [u32; 16],
    pub ram: u8,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LineRam {
    pub a: [u32; 4],
    pub b: [u32; 4],
    #[serde(serialize_with = "rational::serialize")]
    pub ram: Rational64,
    #[serde(serialize_with = "rational::serialize")]
    pub ram_in_a: Rational64,
    #[serde(serialize_with = "rational::serialize")]
    pub ram_in_b: Rational64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TripleRam {
    pub divisors: [[u32; 4]; 3],
    /// Generators of the diagonal group H ∩ Ram_G(P) in the three transvection coordinates.
    pub weights: Vec<[u32; 3]>,
    pub group_order: u64,
    #[serde(serialize_with = "rational::serialize")]
    pub delta: Rational64,
    #[serde(serialize_with = "rational::serialize")]
    pub mult_bound: Rational64,
    /// H-orbit label (smallest triple index in the orbit).
    pub orbit: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FamilyMeans {
    #[serde(serialize_with = "rational::serialize")]
    pub d: Rational64,
    #[serde(serialize_with = "rational::serialize")]
    pub e: Rational64,
    #[serde(serialize_with = "rational::serialize")]
    pub f: Rational64,
    #[serde(serialize_with = "rational::serialize")]
    pub dd: Rational64,
    #[serde(serialize_with = "rational::serialize")]
    pub triple_delta: Rational64,
    /// Sum of exact multiplicities over H-orbits of triple points, over |G:H|.
    #[serde(serialize_with = "serialize_opt")]
    pub ddd: Option<Rational64>,
}

fn serialize_opt<S: serde::Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => rational::serialize(r, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RamificationReport {
    pub level: u32,
    pub prime: u32,
    pub exponent: u32,
    #[serde(serialize_with = "rational::serialize_u128")]
    pub subgroup_order: u128,
    #[serde(serialize_with = "rational::serialize_u128")]
    pub index: u128,
    pub contains_center: bool,
    pub d: Vec<VectorRam>,
    pub e: Vec<InvolutionRam>,
    pub f: Vec<InvolutionRam>,
    pub lines: Vec<LineRam>,
    pub triples: Vec<TripleRam>,
    pub triple_orbits: usize,
    pub means: FamilyMeans,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

impl RamificationReport {
    /// Every invariant of `h` over the boundary strata of `atlas`.
    pub fn compute(h: &Subgroup, atlas: &Atlas) -> Result<Self> {
        let n = atlas.level();
        if h.level() != n {
            return Err(Error::ModulusMismatch(n, h.level()));
        }
        let (p, t) = prime_power(n).ok_or(Error::NotPrimePower(n))?;
        let chain = h.closure()?;
        let order = chain.order();
        let index = full_chain(n).order() / order;

        let planes = atlas.planes();
        let groups: Vec<Howell<3>> = planes.par_iter().map(|pd| unipotent_group(chain, &pd.frame)).collect();

        // D: one plane through each divisor suffices
        let mut d_ram = vec![None; atlas.divisors_d().len()];
        for (pd, s) in planes.iter().zip(&groups) {
            for &(di, (x, y)) in &pd.divisors {
                if d_ram[di as usize].is_none() {
                    let hat = sym_hat(x, y, n);
                    let count =
                        (0..n as u64).filter(|&a| s.contains(&hat.map(|c| (c as u64 * a % n as u64) as u32))).count();
                    d_ram[di as usize] = Some(count as i64);
                }
            }
        }
        let d: Vec<VectorRam> = atlas
            .divisors_d()
            .iter()
            .zip(&d_ram)
            .map(|(x, c)| VectorRam {
                vector: x.vector().coords(),
                ram: Rational64::new(c.expect("every divisor lies in a plane"), n as i64),
            })
            .collect();

        let e: Vec<InvolutionRam> = atlas
            .e_divisors()
            .par_iter()
            .map(|x| {
                let inv = e_involution(x);
                InvolutionRam { involution: inv.rep().flat(), ram: contains_pm(chain, &inv) as u8 }
            })
            .collect();
        let f: Vec<InvolutionRam> = atlas
            .f_divisors()
            .par_iter()
            .map(|x| InvolutionRam {
                involution: x.involution().rep().flat(),
                ram: contains_pm(chain, &x.involution()) as u8,
            })
            .collect();

        let coords_in = |pi: usize, di: u32| -> (u32, u32) {
            let ds = &planes[pi].divisors;
            let k = ds.binary_search_by_key(&di, |e| e.0).expect("divisor in plane");
            ds[k].1
        };
        let d_all = atlas.divisors_d();
        let lines: Vec<LineRam> = atlas
            .line_meta()
            .par_iter()
            .map(|&(a, b, pi)| {
                let g = line_group_from(&groups[pi as usize], coords_in(pi as usize, a), coords_in(pi as usize, b));
                LineRam {
                    a: d_all[a as usize].vector().coords(),
                    b: d_all[b as usize].vector().coords(),
                    ram: Rational64::new(g.exponent() as i64, n as i64),
                    ram_in_a: ram_in_side(&g, 0),
                    ram_in_b: ram_in_side(&g, 1),
                }
            })
            .collect();

        // H-orbits of triple points
        let meta = atlas.triple_meta();
        let mut parent: Vec<u32> = (0..meta.len() as u32).collect();
        for g in h.generators() {
            let perm = atlas.d_permutation(g);
            for (i, (k, _)) in meta.iter().enumerate() {
                let j = atlas.triple_index(k.map(|x| perm[x as usize])).expect("image triple") as u32;
                let (ri, rj) = (find(&mut parent, i as u32), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj) as usize] = ri.min(rj);
                }
            }
        }
        let roots: Vec<u32> = (0..meta.len() as u32).map(|i| find(&mut parent, i)).collect();

        let cache: Mutex<HashMap<ToricSingularity, (Rational64, Rational64)>> = Mutex::new(HashMap::new());
        let triples: Vec<TripleRam> = meta
            .par_iter()
            .enumerate()
            .map(|(i, (k, pi))| {
                let coords = k.map(|di| coords_in(*pi as usize, di));
                let ts = triple_group_from(&groups[*pi as usize], coords);
                let cached = cache.lock().expect("cache").get(&ts).copied();
                let (delta, mb) = cached.unwrap_or_else(|| {
                    let v = (ts.delta(), ts.mult_upper_bound());
                    cache.lock().expect("cache").insert(ts.clone(), v);
                    v
                });
                TripleRam {
                    divisors: k.map(|di| d_all[di as usize].vector().coords()),
                    weights: ts.weights().to_vec(),
                    group_order: ts.order(),
                    delta,
                    mult_bound: mb,
                    orbit: roots[i] as usize,
                }
            })
            .collect();

        let mut reps: Vec<usize> = roots.iter().map(|&r| r as usize).collect();
        reps.sort_unstable();
        reps.dedup();
        let ddd = if n <= MULT_EXACT_MAX_N {
            let mults: Vec<u64> = reps
                .par_iter()
                .map(|&i| {
                    let tr = &triples[i];
                    let w: Vec<[i64; 3]> = tr.weights.iter().map(|r| r.map(|x| x as i64)).collect();
                    ToricSingularity::new(n, &w).and_then(|ts| ts.mult_exact())
                })
                .collect::<Result<_>>()?;
            let total: u64 = mults.iter().sum();
            Some(Rational64::new(total as i64, index as i64))
        } else {
            None
        };

        let mean_ram = |xs: &mut dyn Iterator<Item = Rational64>, count: usize| -> Rational64 {
            // all values here have denominator dividing n
            let num: i64 = xs.map(|r| r.numer() * (n as i64 / r.denom())).sum();
            Rational64::new(num, n as i64 * count.max(1) as i64)
        };
        let means = FamilyMeans {
            d: mean_ram(&mut d.iter().map(|x| x.ram), d.len()),
            e: Rational64::new(e.iter().map(|x| x.ram as i64).sum(), e.len().max(1) as i64),
            f: Rational64::new(f.iter().map(|x| x.ram as i64).sum(), f.len().max(1) as i64),
            dd: mean_ram(&mut lines.iter().map(|x| x.ram), lines.len()),
            triple_delta: mean_ram(&mut triples.iter().map(|x| x.delta), triples.len()),
            ddd,
        };
        Ok(RamificationReport {
            level: n,
            prime: p,
            exponent: t,
            subgroup_order: order,
            index,
            contains_center: h.contains_center()?,
            d,
            e,
            f,
            lines,
            triples,
            triple_orbits: reps.len(),
            means,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{LineLD, TriplePoint};
    use crate::ramification::{delta_at_triple, ram_e, ram_f, ram_line, ram_line_in_divisor, ram_v};
    use crate::symplectic::{phi0, transvection_unchecked, GroupElement, Vector4};

    #[test]
    fn full_and_center() {
        let n = 3;
        let atlas = Atlas::new(n).unwrap();
        let g = RamificationReport::compute(&Subgroup::full(n), &atlas).unwrap();
        let one = Rational64::from_integer(1);
        assert_eq!(g.index, 1);
        assert_eq!((g.means.d, g.means.e, g.means.f, g.means.dd), (one, one, one, one));
        assert_eq!(g.means.ddd, Some(one));
        assert_eq!(g.triple_orbits, 1);
        let c = RamificationReport::compute(&Subgroup::center(n), &atlas).unwrap();
        assert_eq!(c.means.d, Rational64::new(1, 3));
        assert_eq!(c.means.e, Rational64::from_integer(0));
        assert_eq!(c.index, 25920);
        assert_eq!(c.triple_orbits, c.triples.len());
    }

    #[test]
    fn report_matches_direct_scans() {
        let n = 5;
        let atlas = Atlas::new(n).unwrap();
        let h = Subgroup::new(
            n,
            vec![
                GroupElement::minus_identity(n),
                phi0(n),
                transvection_unchecked(&Vector4::new([1, 2, 0, 0], n), 1),
                transvection_unchecked(&Vector4::new([0, 1, 0, 0], n), 2),
            ],
        )
        .unwrap();
        let r = RamificationReport::compute(&h, &atlas).unwrap();
        for (x, vr) in atlas.divisors_d().iter().zip(&r.d).step_by(7) {
            assert_eq!(ram_v(&h, &x.vector()).unwrap(), vr.ram);
        }
        for (x, er) in atlas.e_divisors().iter().zip(&r.e).step_by(5) {
            assert_eq!(ram_e(&h, x).unwrap(), er.ram);
        }
        for (x, fr) in atlas.f_divisors().iter().zip(&r.f).step_by(5) {
            assert_eq!(ram_f(&h, x).unwrap(), fr.ram);
        }
        let lines: &[LineLD] = atlas.lines();
        for (l, lr) in lines.iter().zip(&r.lines).step_by(37) {
            assert_eq!(ram_line(&h, l).unwrap(), lr.ram);
            let (a, b) = l.divisors();
            assert_eq!(ram_line_in_divisor(&h, l, &a).unwrap(), lr.ram_in_a);
            assert_eq!(ram_line_in_divisor(&h, l, &b).unwrap(), lr.ram_in_b);
        }
        let ts: &[TriplePoint] = atlas.triples();
        for (p, tr) in ts.iter().zip(&r.triples).step_by(41) {
            assert_eq!(delta_at_triple(&h, p).unwrap(), tr.delta);
        }
        assert!(r.means.d > Rational64::new(1, 5));
    }
}
