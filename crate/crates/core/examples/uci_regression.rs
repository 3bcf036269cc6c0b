//! Multi-hypothesis regression on a CSV table whose last column is the
//! target. Without an argument a small synthetic table with a bimodal target
//! is generated in a temporary directory.
//!
//! Usage: `cargo run --release --example uci_regression -- [table.csv]`

use std::path::PathBuf;

use amcl::data::{ColumnSelector, FoldSpec};
use amcl::network::{InitScheme, OptimizerKind, OutputActivation};
use amcl::numerics::SeededRng;
use amcl::schedulers::ScheduleSpec;
use amcl::trainer::{train, DataConfig, Method, NetworkConfig, TrainConfig, TrainerSettings, TrajectoryConfig};

fn synthetic_table(dir: &std::path::Path) -> std::io::Result<PathBuf> {
    let mut rng = SeededRng::new(6);
    let mut text = String::from("x1,x2,y\n");
    for _ in 0..600 {
        let (x1, x2) = (rng.uniform(), rng.uniform());
        let branch = if rng.uniform() < 0.5 { 1.0 } else { -1.0 };
        let y = 10.0 + 4.0 * x1 + branch * (2.0 + x2) + 0.2 * rng.normal();
        text.push_str(&format!("{x1},{x2},{y}\n"));
    }
    let path = dir.join("bimodal.csv");
    std::fs::write(&path, text)?;
    Ok(path)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scratch = tempfile::tempdir()?;
    let path = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => synthetic_table(scratch.path())?,
    };
    for method in [Method::Mcl, Method::Amcl] {
        let config = TrainConfig {
            seed: 1,
            trainer: TrainerSettings {
                method,
                n_hypotheses: 5,
                epochs: 300,
                batch_size: 64,
                optimizer: OptimizerKind::Adam,
                learning_rate: 0.01,
                eval_every: 50,
                epsilon: None,
                epsilon_t_max: None,
                scoring_weight: 1.0,
            },
            schedule: (method == Method::Amcl).then(|| ScheduleSpec::exponential(0.5, 0.95).unwrap()),
            network: NetworkConfig {
                hidden: vec![50],
                output_activation: OutputActivation::None,
                init: InitScheme::HeUniform,
            },
            data: DataConfig::Csv {
                path: path.clone(),
                targets: ColumnSelector::Last(1),
                fold: FoldSpec::Shuffled {
                    name: "example".into(),
                    fold: 0,
                    test_fraction: 0.1,
                },
            },
            trajectory: TrajectoryConfig::default(),
        };
        let out = train(&config)?;
        println!(
            "{method:?}: distortion {:.4}, rmse {:.4} (original units, {} test rows)",
            out.report.hard_distortion, out.report.rmse, out.report.samples
        );
    }
    Ok(())
}
