//! Conjugating integral involutions to the standard one and the (i,i) stabilizer relations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sp4lab::quartic::{
    int_mul, int_symplectic_inverse, involution_normal_form, phi0_int, random_gamma1, stab_ii_relations,
};

fn main() -> sp4lab::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let phi = phi0_int();
    for _ in 0..5 {
        let g = random_gamma1(&mut rng, 6);
        let m = int_mul(&int_mul(&g, &phi)?, &int_symplectic_inverse(&g))?;
        let nf = involution_normal_form(&m)?;
        let p = nf.conjugator;
        let back = int_mul(&int_mul(&int_symplectic_inverse(&p), &m)?, &p)?;
        println!("M = {m:?}\n  P = {p:?}\n  P^-1 M P = phi0: {}", back == phi);
    }
    let r = stab_ii_relations();
    println!("(i,i) stabilizer: order {} mod sign, relations hold {}", r.order_mod_sign, r.holds());
    Ok(())
}
