//! Randomized checks of the matrix identities the ramification bounds rest on.

use sp4lab::ramification::verify_identities;

fn main() -> sp4lab::error::Result<()> {
    for n in [9, 25, 27] {
        let report = verify_identities(n, 2000, 1)?;
        for c in &report.checks {
            let tag = if c.asserted { "" } else { " (expected to fail)" };
            println!("n={n:<3} {:<28} {:>5}/{} failures{tag}", c.name, c.failures, c.trials);
        }
        assert!(report.holds());
    }
    Ok(())
}
