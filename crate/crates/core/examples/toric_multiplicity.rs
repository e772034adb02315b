//! δ, the multiplicity bound and the exact multiplicity of a few abelian quotients.

use sp4lab::toric::{census, ToricSingularity};

fn main() -> sp4lab::error::Result<()> {
    let cases: [(u32, &[[i64; 3]]); 5] =
        [(2, &[[1, 1, 1]]), (3, &[[1, 1, 1]]), (5, &[[1, 2, 3]]), (7, &[[1, 2, 4]]), (4, &[[1, 0, 3], [0, 2, 2]])];
    for (n, weights) in cases {
        let t = ToricSingularity::new(n, weights)?;
        println!(
            "1/{n}{weights:?}: |A| = {}, delta = {}, mult = {} <= {}",
            t.order(),
            t.delta(),
            t.mult_exact()?,
            t.mult_upper_bound()
        );
    }
    let c = census(3, 2, num_rational::Rational64::new(1, 2))?;
    println!("census 3^2, eps 1/2: {} actions, bound {}, satisfied {}", c.count, c.bound, c.satisfied);
    Ok(())
}
