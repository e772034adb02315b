//! Stabilizer of a point of the quartic, tangent weights and the fixed loci of S6 classes.

use sp4lab::quartic::{
    classify_permutation_fixed_locus, listed_representatives, min_age, parse_point, stabilizer, tangent_weights,
    DEFAULT_CONDUCTOR,
};

fn main() -> sp4lab::error::Result<()> {
    let x = parse_point("(1 : theta : theta^2 : theta^3 : theta^4 : 0)", DEFAULT_CONDUCTOR)?;
    for s in stabilizer(&x)? {
        let w = tangent_weights(&x, &s)?;
        let pairs: Vec<(u32, u32)> = w.weights.iter().map(|&a| (a, w.order)).collect();
        let age = min_age(&pairs).map(|a| a.to_string()).unwrap_or_else(|| "-".into());
        println!("{:<14} order {:>2} weights {:?} min age {age}", s.sigma.to_string(), w.order, w.weights);
    }
    for sigma in listed_representatives() {
        let r = classify_permutation_fixed_locus(&sigma)?;
        let loci: Vec<String> = r.components.iter().map(|c| c.locus.describe()).collect();
        println!("{:<14} {:?}: {}", r.sigma, r.cycle_type, loci.join("; "));
    }
    Ok(())
}
