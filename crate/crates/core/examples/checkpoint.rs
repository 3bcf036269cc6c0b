//! Trains a small bank, saves it, reloads it and checks the predictions agree.

use amcl::data::SyntheticKind;
use amcl::network::HypothesisBank;
use amcl::schedulers::ScheduleSpec;
use amcl::trainer::{evaluate, train, DataConfig, Method, NetworkConfig, TrainConfig, TrainerSettings, TrajectoryConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = TrainConfig {
        seed: 2,
        trainer: TrainerSettings {
            method: Method::Amcl,
            n_hypotheses: 3,
            epochs: 40,
            batch_size: 128,
            optimizer: amcl::network::OptimizerKind::Adam,
            learning_rate: 0.01,
            eval_every: 10,
            epsilon: None,
            epsilon_t_max: None,
            scoring_weight: 1.0,
        },
        schedule: Some(ScheduleSpec::linear(0.3, 40)?),
        network: NetworkConfig {
            hidden: vec![32],
            ..NetworkConfig::default()
        },
        data: DataConfig::synthetic(SyntheticKind::ThreeGaussians, 2000, 1000),
        trajectory: TrajectoryConfig::default(),
    };
    let out = train(&config)?;
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("bank.ckpt");
    out.bank.save(&path)?;
    let restored = HypothesisBank::load(&path)?;
    let before = evaluate(&out.bank, &out.eval, None)?;
    let after = evaluate(&restored, &out.eval, None)?;
    println!("{} parameters written to {}", restored.param_count(), path.display());
    println!("distortion before {:.6}, after {:.6}", before.hard_distortion, after.hard_distortion);
    assert_eq!(before, after);
    Ok(())
}
