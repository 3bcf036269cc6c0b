//! Trains the same bank with each training rule on the conditional
//! three-Gaussian task and prints the final validation metrics.
//!
//! Usage: `cargo run --release --example relaxed_wta -- [epochs]`

use amcl::data::SyntheticKind;
use amcl::metrics::EvalReport;
use amcl::network::{InitScheme, OptimizerKind, OutputActivation};
use amcl::schedulers::ScheduleSpec;
use amcl::trainer::{train, DataConfig, Method, NetworkConfig, TrainConfig, TrainerSettings, TrajectoryConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let epochs: usize = std::env::args().nth(1).map_or(Ok(100), |s| s.parse())?;
    println!("method,{}", EvalReport::CSV_HEADER);
    for method in [Method::Mcl, Method::Relaxed, Method::RelaxedAnnealed, Method::Amcl] {
        let config = TrainConfig {
            seed: 8,
            trainer: TrainerSettings {
                method,
                n_hypotheses: 9,
                epochs,
                batch_size: 256,
                optimizer: OptimizerKind::Adam,
                learning_rate: 0.01,
                eval_every: epochs,
                epsilon: matches!(method, Method::Relaxed | Method::RelaxedAnnealed).then_some(0.1),
                epsilon_t_max: None,
                scoring_weight: 1.0,
            },
            schedule: (method == Method::Amcl).then(|| ScheduleSpec::exponential(0.5, 0.95).unwrap()),
            network: NetworkConfig {
                hidden: vec![64, 64],
                output_activation: OutputActivation::Tanh,
                init: InitScheme::HeUniform,
            },
            data: DataConfig::synthetic(SyntheticKind::ConditionalThreeGaussians, 4000, 2000),
            trajectory: TrajectoryConfig::default(),
        };
        let out = train(&config)?;
        println!("{method:?},{}", out.report.csv_row());
    }
    Ok(())
}
