//! Seeded randomized properties of the level groups.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sp4lab::chain::{full_chain, Subgroup};
use sp4lab::symplectic::{is_symplectic, skew_form, sp4_order, transvection, GroupElement, Residue, Vector4};

const LEVELS: [u32; 6] = [3, 4, 5, 8, 9, 25];

fn random_vector(rng: &mut ChaCha8Rng, n: u32) -> Vector4 {
    Vector4::new(std::array::from_fn(|_| rng.random_range(0..n as i64)), n)
}

#[test]
fn skew_form_invariance() {
    for n in LEVELS {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let full = full_chain(n);
        for _ in 0..10_000 {
            let g = full.random_element(&mut rng);
            assert!(is_symplectic(&g.rows(), n));
            let (u, v) = (random_vector(&mut rng, n), random_vector(&mut rng, n));
            assert_eq!(skew_form(&g.apply(&u), &g.apply(&v)).unwrap(), skew_form(&u, &v).unwrap(), "n={n} g={g}");
        }
    }
}

#[test]
fn transvection_equivariance() {
    for n in LEVELS {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + n as u64);
        let full = full_chain(n);
        let mut done = 0;
        while done < 1000 {
            let v = random_vector(&mut rng, n);
            if !v.is_primitive() {
                continue;
            }
            let g = full.random_element(&mut rng);
            let a = Residue::new(rng.random_range(0..n as i64), n);
            let lhs = transvection(&v, a).unwrap().conjugate_by(&g);
            assert_eq!(lhs, transvection(&g.apply(&v), a).unwrap());
            done += 1;
        }
    }
}

#[test]
fn closure_order_is_presentation_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [3u32, 4, 5] {
        let full = full_chain(n);
        for _ in 0..20 {
            let k = rng.random_range(1..=3);
            let gens: Vec<GroupElement> =
                (0..k).map(|_| full.random_element(&mut rng).pow(rng.random_range(1..7))).collect();
            let order = Subgroup::new(n, gens.clone()).unwrap().order().unwrap();
            let mut shuffled = gens.clone();
            shuffled.shuffle(&mut rng);
            assert_eq!(Subgroup::new(n, shuffled).unwrap().order().unwrap(), order);
            // random words in the generators, plus the originals so nothing is lost
            let mut words: Vec<GroupElement> = (0..3)
                .map(|_| (0..6).fold(GroupElement::identity(n), |acc, _| acc * gens[rng.random_range(0..k)]))
                .collect();
            words.extend(gens.iter().rev().copied());
            assert_eq!(Subgroup::new(n, words).unwrap().order().unwrap(), order);
            assert_eq!(sp4_order(n) % order, 0);
        }
    }
}

#[test]
fn full_group_orders() {
    for (n, order) in [(2u32, 720u128), (3, 51_840), (4, 737_280), (5, 9_360_000)] {
        assert_eq!(sp4_order(n), order);
        assert_eq!(full_chain(n).order(), order);
    }
}
