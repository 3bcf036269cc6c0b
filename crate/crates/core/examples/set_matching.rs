//! Compares set-matching losses on random instances: the winner-takes-all
//! lower bound, its annealed version, and the optimal permutation found by
//! exhaustive search and by the Hungarian algorithm.

use std::time::Instant;

use amcl::assignment::{awta_match_loss, mcl_match_loss, pit_loss_with, uniform_match_loss, MatchInstance, PitMode};
use amcl::numerics::SeededRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = SeededRng::new(3);
    println!(" m     mcl    awta(0.1)  pit      uniform  hungarian_us  exhaustive_us");
    for m in 2..=8 {
        let instance = MatchInstance::random(m, m, 2, &mut rng)?;
        let started = Instant::now();
        let hungarian = pit_loss_with(&instance, PitMode::Hungarian)?;
        let hungarian_us = started.elapsed().as_secs_f64() * 1e6;
        let started = Instant::now();
        let exhaustive = pit_loss_with(&instance, PitMode::Exhaustive)?;
        let exhaustive_us = started.elapsed().as_secs_f64() * 1e6;
        assert!((hungarian.value - exhaustive.value).abs() < 1e-12);
        println!(
            "{m:2}  {:7.4}  {:9.4}  {:7.4}  {:7.4}  {hungarian_us:12.1}  {exhaustive_us:13.1}",
            mcl_match_loss(&instance),
            awta_match_loss(&instance, 0.1)?,
            hungarian.value,
            uniform_match_loss(&instance),
        );
    }
    Ok(())
}
