//! Randomized subgroup experiments for the index bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bounds::{bound_check_with, BoundVerdict, Family};
use super::report::RamificationReport;
use crate::atlas::Atlas;
use crate::chain::{full_chain, Subgroup};
use crate::error::{Error, Result};
use crate::modular::prime_power;
use crate::rational;
use crate::symplectic::{phi0, psi0, translation, transvection_unchecked, GroupElement};

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub level: u32,
    pub generators: Vec<[u32; 16]>,
    #[serde(serialize_with = "rational::serialize_u128")]
    pub index: u128,
    pub verdicts: Vec<BoundVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub entries: Vec<SweepEntry>,
    pub refutations: usize,
}

fn p_multiple<R: Rng>(rng: &mut R, p: u32, t: u32) -> u32 {
    let j = rng.random_range(0..t);
    let n = p.pow(t);
    (rng.random_range(1..n) * p.pow(j)) % n
}

/// One to three generators, each a random conjugate of a transvection
/// power, a unipotent element of a Lagrangian stabilizer, an E- or
/// F-involution, or (rarely) a uniform element; -1 is adjoined.
pub fn random_subgroup<R: Rng>(n: u32, rng: &mut R) -> Result<Subgroup> {
    let (p, t) = prime_power(n).ok_or(Error::NotPrimePower(n))?;
    let full = full_chain(n);
    let k = rng.random_range(1..=3);
    let mut gens = Vec::with_capacity(k + 1);
    for _ in 0..k {
        let g = full.random_element(rng);
        let x = match rng.random_range(0..9) {
            0..=2 => transvection_unchecked(&g.column(0), p_multiple(rng, p, t).max(1)),
            3..=4 => {
                let s = [p_multiple(rng, p, t), p_multiple(rng, p, t), p_multiple(rng, p, t)];
                translation(s[0] as i64, s[1] as i64, s[2] as i64, n).conjugate_by(&g)
            }
            5..=6 => phi0(n).conjugate_by(&g),
            7 => psi0(n).conjugate_by(&g),
            _ => g,
        };
        gens.push(x);
    }
    gens.push(GroupElement::minus_identity(n));
    Subgroup::new(n, gens)
}

/// `per_level` random subgroups at each level; every bound is checked.
pub fn sweep(levels: &[u32], per_level: usize, seed: u64) -> Result<SweepReport> {
    let mut jobs = Vec::new();
    for &n in levels {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for _ in 0..per_level {
            jobs.push(random_subgroup(n, &mut rng)?);
        }
    }
    let atlases: Vec<(u32, Atlas)> = levels.iter().map(|&n| Atlas::new(n).map(|a| (n, a))).collect::<Result<_>>()?;
    let entries: Vec<SweepEntry> = jobs
        .par_iter()
        .map(|h| {
            let atlas = &atlases.iter().find(|(n, _)| *n == h.level()).expect("atlas per level").1;
            let r = RamificationReport::compute(h, atlas)?;
            let verdicts = Family::ALL.iter().map(|&f| bound_check_with(&r, f)).collect::<Result<Vec<_>>>()?;
            Ok(SweepEntry {
                level: h.level(),
                generators: h.generators().iter().map(|g| g.flat()).collect(),
                index: r.index,
                verdicts,
            })
        })
        .collect::<Result<_>>()?;
    let refutations = entries.iter().flat_map(|e| &e.verdicts).filter(|v| !v.satisfied).count();
    Ok(SweepReport { seed, entries, refutations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_is_deterministic() {
        let a = sweep(&[3], 4, 5).unwrap();
        let b = sweep(&[3], 4, 5).unwrap();
        assert_eq!(a.refutations, 0);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
