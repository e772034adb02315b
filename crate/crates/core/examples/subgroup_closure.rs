//! Closing a few generators into a stabilizer chain and reading off orders and indices.

use sp4lab::chain::{full_chain, Subgroup};
use sp4lab::symplectic::{phi0, psi0, sp4_order, translation, GroupElement};

fn main() -> sp4lab::error::Result<()> {
    let n = 5;
    let full = full_chain(n);
    println!("|Sp4(Z/{n})| = {} (formula {})", full.order(), sp4_order(n));
    println!("base orbit sizes: {:?}", full.orbit_sizes());

    let cases: Vec<(&str, Vec<GroupElement>)> = vec![
        ("<phi0>", vec![phi0(n)]),
        ("<phi0, psi0>", vec![phi0(n), psi0(n)]),
        ("translations", vec![translation(1, 0, 0, n), translation(0, 1, 0, n), translation(0, 0, 1, n)]),
    ];
    for (name, gens) in cases {
        let h = Subgroup::new(n, gens)?;
        let hc = h.adjoin_center();
        println!(
            "{name:<14} order {:>4}  with -1: {:>4}  index {}",
            h.order()?,
            hc.order()?,
            h.index_in(&Subgroup::full(n))?
        );
    }
    Ok(())
}
