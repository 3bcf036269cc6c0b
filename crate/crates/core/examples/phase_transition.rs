//! Cools four hypotheses through the first critical temperature of a 1-D
//! Gaussian and reports where the trajectory first splits.
//!
//! Usage: `cargo run --release --example phase_transition -- [sigma] [epochs]`

use amcl::data::SyntheticKind;
use amcl::diagnostics::detect_split_temperature;
use amcl::network::{InitScheme, OptimizerKind, OutputActivation};
use amcl::schedulers::ScheduleSpec;
use amcl::trainer::{train, DataConfig, Method, NetworkConfig, TrainConfig, TrainerSettings, TrajectoryConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let sigma: f64 = args.get(1).map_or(Ok(0.1), |s| s.parse())?;
    let epochs: usize = args.get(2).map_or(Ok(2000), |s| s.parse())?;
    let critical = 2.0 * sigma * sigma;
    let config = TrainConfig {
        seed: 1,
        trainer: TrainerSettings {
            method: Method::Amcl,
            n_hypotheses: 4,
            epochs,
            batch_size: 256,
            optimizer: OptimizerKind::Sgd,
            learning_rate: 0.05,
            eval_every: (epochs / 100).max(1),
            epsilon: None,
            epsilon_t_max: None,
            // the score head shares the backbone and would jitter the fused state
            scoring_weight: 0.0,
        },
        schedule: Some(ScheduleSpec::linear(2.0 * critical, epochs)?),
        network: NetworkConfig {
            hidden: vec![16],
            output_activation: OutputActivation::Tanh,
            init: InitScheme::HeUniform,
        },
        data: DataConfig::Synthetic {
            kind: SyntheticKind::SingleGaussian1d,
            sigma,
            pool_size: 4000,
            fixed_pool: true,
            eval_size: 5000,
        },
        trajectory: TrajectoryConfig::default(),
    };
    let out = train(&config)?;
    println!("epoch  temperature  soft_distortion  clusters");
    for p in out.trajectory.iter().step_by(5) {
        println!("{:5}  {:11.5}  {:15.6}  {}", p.epoch, p.temperature, p.soft_distortion, p.cluster_count);
    }
    match detect_split_temperature(&out.trajectory) {
        Some(t) => println!("split at T = {t:.5}; 2 sigma^2 = {critical:.5} (ratio {:.3})", t / critical),
        None => println!("no split detected; 2 sigma^2 = {critical:.5}"),
    }
    Ok(())
}
