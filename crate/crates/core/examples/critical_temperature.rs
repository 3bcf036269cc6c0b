//! Estimates the first critical temperature 2 λ_max(Cov[y | x]) of the
//! conditional three-Gaussian family on a grid of inputs.

use amcl::data::{SyntheticKind, SyntheticSpec};
use amcl::diagnostics::{global_bound, probe_grid};
use amcl::numerics::SeededRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SyntheticSpec::new(SyntheticKind::ConditionalThreeGaussians, 0.1)?;
    let bound = global_bound(&spec, &probe_grid(11), 5000, &mut SeededRng::new(5))?;
    println!("    x  lambda_max    T0c    D_max");
    for p in &bound.probes {
        let r = &p.report;
        println!("{:5.2}  {:10.4}  {:6.4}  {:6.4}", p.x, r.lambda_max, r.critical_temperature, r.d_max);
    }
    if let Some(b) = bound.bound {
        println!("annealing should start above {b:.4}");
    }
    Ok(())
}
