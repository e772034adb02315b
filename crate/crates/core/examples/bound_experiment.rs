//! A seeded sweep of random subgroups against the index bounds.
//!
//!     cargo run --release --example bound_experiment -- 3 20 42

use sp4lab::ramification::sweep;

fn main() -> sp4lab::error::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("integer argument"));
    let level = args.next().unwrap_or(3) as u32;
    let count = args.next().unwrap_or(10) as usize;
    let seed = args.next().unwrap_or(42);
    let report = sweep(&[level], count, seed)?;
    for e in &report.entries {
        let verdicts: Vec<String> = e
            .verdicts
            .iter()
            .map(|v| format!("{:?}:{}", v.family, if v.satisfied { "ok" } else { "REFUTED" }))
            .collect();
        println!("index {:>10}  {}", e.index, verdicts.join(" "));
    }
    println!("{} subgroups, {} refutations", report.entries.len(), report.refutations);
    Ok(())
}
