//! Sizes of the boundary strata at small levels, next to the closed formulas.
//!
//!     cargo run --example atlas_counts -- 7

use sp4lab::atlas::{d_count_formula, line_count_formula, Atlas};

fn main() -> sp4lab::error::Result<()> {
    let max: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    println!("{:>3} {:>6} {:>6} {:>6} {:>6} {:>7} {:>7}", "n", "D", "cusps", "E", "F", "lines", "triples");
    for n in 3..=max {
        let atlas = Atlas::new(n)?;
        let c = atlas.counts();
        assert_eq!(c.d as u64, d_count_formula(n));
        assert_eq!(atlas.lines().len() as u64, line_count_formula(n));
        println!(
            "{n:>3} {:>6} {:>6} {:>6} {:>6} {:>7} {:>7}",
            c.d,
            atlas.cusps().len(),
            atlas.e_divisors().len(),
            atlas.f_divisors().len(),
            atlas.lines().len(),
            atlas.triples().len()
        );
    }
    Ok(())
}
