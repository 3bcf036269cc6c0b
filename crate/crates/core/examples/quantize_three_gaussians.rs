//! Quantizes a mixture of three Gaussians with 49 hypotheses, trained once
//! with plain winner-takes-all and once with annealing, and compares both
//! against a Lloyd codebook fitted to the same validation set.
//!
//! Usage: `cargo run --release --example quantize_three_gaussians -- [epochs] [seed]`

use amcl::data::SyntheticKind;
use amcl::metrics::lloyd_codebook;
use amcl::network::{InitScheme, OptimizerKind, OutputActivation};
use amcl::numerics::SeededRng;
use amcl::schedulers::ScheduleSpec;
use amcl::trainer::{train, DataConfig, Method, NetworkConfig, TrainConfig, TrainerSettings, TrajectoryConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let epochs: usize = args.get(1).map_or(Ok(1000), |s| s.parse())?;
    let seed: u64 = args.get(2).map_or(Ok(1), |s| s.parse())?;

    let config = |method| TrainConfig {
        seed,
        trainer: TrainerSettings {
            method,
            n_hypotheses: 49,
            epochs,
            batch_size: 256,
            optimizer: OptimizerKind::Sgd,
            learning_rate: 0.01,
            eval_every: (epochs / 10).max(1),
            epsilon: None,
            epsilon_t_max: None,
            scoring_weight: 1.0,
        },
        schedule: (method == Method::Amcl).then(|| ScheduleSpec::exponential(0.6, 0.99).unwrap()),
        network: NetworkConfig {
            hidden: vec![32],
            output_activation: OutputActivation::Tanh,
            init: InitScheme::HeUniform,
        },
        data: DataConfig::Synthetic {
            kind: SyntheticKind::ThreeGaussians,
            sigma: 0.1,
            pool_size: 2000,
            fixed_pool: false,
            eval_size: 5000,
        },
        trajectory: TrajectoryConfig::default(),
    };

    let mcl = train(&config(Method::Mcl))?;
    let amcl = train(&config(Method::Amcl))?;
    let lloyd = lloyd_codebook(amcl.eval.targets(), 49, 300, 5, &mut SeededRng::new(seed))?;

    println!("epoch  T        aMCL distortion  clusters");
    for p in &amcl.trajectory {
        println!("{:5}  {:7.4}  {:15.6}  {}", p.epoch, p.temperature, p.hard_distortion, p.cluster_count);
    }
    println!();
    println!("MCL    {:.6}", mcl.report.hard_distortion);
    println!("aMCL   {:.6}", amcl.report.hard_distortion);
    println!("Lloyd  {:.6}", lloyd.distortion);
    Ok(())
}
