//! CRT splitting at a composite level and generation of a kernel layer by conjugates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sp4lab::chain::full_chain;
use sp4lab::congruence::{kernel_generation, KernelLayer, LevelSplit, SpanMode};

fn main() -> sp4lab::error::Result<()> {
    let split = LevelSplit::new(15, 5)?;
    let g = full_chain(15).random_element(&mut ChaCha8Rng::seed_from_u64(9));
    let (a, b) = split.split(&g)?;
    println!("level 15 = {} x {}: round trip {}", split.m, split.q, split.combine(&a, &b)? == g);
    println!("component orders {:?}", split.component_orders());

    for (p, i) in [(5, 2), (7, 2), (5, 3)] {
        let layer = KernelLayer::new(p, i)?;
        for mode in [SpanMode::Sampled, SpanMode::Closure] {
            let r = kernel_generation(layer, mode, 1, 16)?;
            println!(
                "p={p} i={i} {mode:?}: dimension {}, rank {} after {} steps, power failures {}/{}",
                r.layer_dimension, r.rank, r.steps, r.power_failures, r.power_trials
            );
        }
    }
    Ok(())
}
