//! Evaluates distortion, entropy, free energy and rate of a fixed codebook
//! across temperatures. High temperatures spread the assignment uniformly;
//! low temperatures recover the hard distortion.

use amcl::data::{sample_synthetic, SyntheticKind, SyntheticSpec};
use amcl::metrics::Predictions;
use amcl::numerics::{Matrix, SeededRng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SyntheticSpec::new(SyntheticKind::ThreeGaussians, 0.1)?;
    let data = sample_synthetic(&spec, 4000, &mut SeededRng::new(2))?;
    let codebook = Matrix::from_vec(3, 2, vec![-0.5, -0.5, 0.5, -0.5, 0.0, 0.5])?;
    let preds = Predictions::shared(&codebook, data.targets())?;

    println!("hard distortion {:.5}", preds.hard_distortion());
    println!("       T   soft_D   entropy   free_energy   rate_bits");
    for t in [10.0, 1.0, 0.3, 0.1, 0.03, 0.01, 0.001] {
        println!(
            "{t:8.3}  {:7.4}  {:8.4}  {:12.5}  {:10.4}",
            preds.soft_distortion(t)?,
            preds.mean_entropy(t)?,
            preds.free_energy(t)?,
            preds.empirical_rate(t)?,
        );
    }
    Ok(())
}
