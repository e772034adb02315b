//! Ramification of a subgroup along every boundary stratum, summarized by family.
//!
//!     cargo run --example ramification_report -- path/to/subgroup.json

use std::path::Path;

use sp4lab::atlas::Atlas;
use sp4lab::chain::Subgroup;
use sp4lab::io::{read_subgroup, render, Format};
use sp4lab::ramification::RamificationReport;
use sp4lab::symplectic::translation;

fn main() -> sp4lab::error::Result<()> {
    let h = match std::env::args().nth(1) {
        Some(path) => read_subgroup(Path::new(&path), false)?,
        None => Subgroup::new(3, vec![translation(1, 0, 0, 3), translation(0, 0, 1, 3)])?,
    };
    let atlas = Atlas::new(h.level())?;
    let r = RamificationReport::compute(&h, &atlas)?;
    println!("level {}  |H| = {}  index {}", r.level, r.subgroup_order, r.index);
    let ramified = r.d.iter().filter(|v| *v.ram.numer() != 0).count();
    println!("D: {ramified} of {} divisors carry ramification", r.d.len());
    println!("triple points: {} in {} orbits", r.triples.len(), r.triple_orbits);
    print!("{}", render(&r.means, Format::Text)?);
    Ok(())
}
