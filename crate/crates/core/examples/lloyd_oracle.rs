//! Optimal scalar quantizers of a standard Gaussian from Lloyd's algorithm,
//! next to the Shannon lower bound at the same rate.

use amcl::metrics::{lloyd_oracle, shannon_lower_bound};
use amcl::numerics::SeededRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = SeededRng::new(4);
    let samples: Vec<f64> = (0..200_000).map(|_| rng.normal()).collect();
    println!(" n  distortion  rate_bits  lower_bound_bits");
    for n in [1usize, 2, 4, 8, 16] {
        let (_, distortion) = lloyd_oracle(&samples, n, 500)?;
        let rate = (n as f64).log2();
        println!("{n:2}  {distortion:10.5}  {rate:9.3}  {:16.3}", shannon_lower_bound(1.0, distortion));
    }
    Ok(())
}
