//! Training loop for MCL, Relaxed-WTA (fixed or annealed ε) and annealed MCL.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::data::{load_csv, sample_synthetic, ColumnSelector, Dataset, FoldSpec, SyntheticKind, SyntheticSpec};
use crate::diagnostics::{TrajectoryPoint, TrajectoryRecorder, DEFAULT_CLUSTER_RADIUS};
use crate::error::{Error, Result};
use crate::losses::AssignmentRule;
use crate::metrics::{EvalReport, Predictions, Scale};
use crate::network::{Architecture, Gradients, HypothesisBank, InitScheme, Optimizer, OptimizerKind, OutputActivation, Tape};
use crate::numerics::SeededRng;
use crate::schedulers::{epsilon_at, ScheduleSpec, Temperature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mcl,
    Relaxed,
    RelaxedAnnealed,
    Amcl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainerSettings {
    pub method: Method,
    pub n_hypotheses: usize,
    pub epochs: usize,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_optimizer")]
    pub optimizer: OptimizerKind,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_eval_every")]
    pub eval_every: usize,
    /// Fixed ε for `relaxed`, initial ε₀ for `relaxed_annealed`.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Decay horizon of the annealed ε; defaults to `epochs`.
    #[serde(default)]
    pub epsilon_t_max: Option<usize>,
    #[serde(default = "default_scoring_weight")]
    pub scoring_weight: f64,
}

fn default_batch_size() -> usize {
    1024
}
fn default_optimizer() -> OptimizerKind {
    OptimizerKind::Adam
}
fn default_learning_rate() -> f64 {
    0.01
}
fn default_eval_every() -> usize {
    5
}
fn default_scoring_weight() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    #[serde(default = "default_hidden")]
    pub hidden: Vec<usize>,
    #[serde(default = "default_activation")]
    pub output_activation: OutputActivation,
    #[serde(default = "default_init")]
    pub init: InitScheme,
}

fn default_hidden() -> Vec<usize> {
    vec![256, 256]
}
fn default_activation() -> OutputActivation {
    OutputActivation::Tanh
}
fn default_init() -> InitScheme {
    InitScheme::HeUniform
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            hidden: default_hidden(),
            output_activation: default_activation(),
            init: default_init(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataConfig {
    Synthetic {
        kind: SyntheticKind,
        #[serde(default = "default_sigma")]
        sigma: f64,
        /// Samples per epoch.
        #[serde(default = "default_pool_size")]
        pool_size: usize,
        /// Reuse one pool for every epoch instead of resampling.
        #[serde(default)]
        fixed_pool: bool,
        /// Size of the validation set used for the trajectory and final report.
        #[serde(default = "default_eval_size")]
        eval_size: usize,
    },
    Csv {
        path: PathBuf,
        targets: ColumnSelector,
        fold: FoldSpec,
    },
}

fn default_sigma() -> f64 {
    0.1
}
fn default_pool_size() -> usize {
    100_000
}
fn default_eval_size() -> usize {
    25_000
}

impl DataConfig {
    pub fn synthetic(kind: SyntheticKind, pool_size: usize, eval_size: usize) -> Self {
        DataConfig::Synthetic {
            kind,
            sigma: default_sigma(),
            pool_size,
            fixed_pool: false,
            eval_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryConfig {
    #[serde(default = "default_radius")]
    pub cluster_radius: f64,
    /// Input at which clusters are counted; defaults to the first validation input.
    #[serde(default)]
    pub probe_input: Option<Vec<f64>>,
}

fn default_radius() -> f64 {
    DEFAULT_CLUSTER_RADIUS
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            cluster_radius: default_radius(),
            probe_input: None,
        }
    }
}

/// Everything needed to reproduce one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    #[serde(default)]
    pub seed: u64,
    pub trainer: TrainerSettings,
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub network: NetworkConfig,
    pub data: DataConfig,
    #[serde(default)]
    pub trajectory: TrajectoryConfig,
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let t = &self.trainer;
        let invalid = |m: String| Err(Error::Validation(m));
        if t.epochs == 0 {
            return invalid("epochs must be at least 1".into());
        }
        if t.n_hypotheses == 0 {
            return invalid("n_hypotheses must be at least 1".into());
        }
        if t.batch_size == 0 {
            return invalid("batch_size must be at least 1".into());
        }
        if t.eval_every == 0 {
            return invalid("eval_every must be at least 1".into());
        }
        if !(t.learning_rate > 0.0) || !t.learning_rate.is_finite() {
            return invalid(format!("learning_rate must be positive, got {}", t.learning_rate));
        }
        if !(t.scoring_weight >= 0.0) {
            return invalid(format!("scoring_weight must be >= 0, got {}", t.scoring_weight));
        }
        match t.method {
            Method::Amcl => match &self.schedule {
                Some(s) => s.validate()?,
                None => return invalid("method amcl needs a [schedule] table".into()),
            },
            Method::Relaxed | Method::RelaxedAnnealed => match t.epsilon {
                Some(e) if (0.0..1.0).contains(&e) => {
                    if e > 0.0 && t.n_hypotheses == 1 {
                        return invalid("relaxed methods with epsilon > 0 need at least two hypotheses".into());
                    }
                }
                Some(e) => return invalid(format!("epsilon must lie in [0, 1), got {e}")),
                None => return invalid("relaxed methods need trainer.epsilon".into()),
            },
            Method::Mcl => {}
        }
        if t.epsilon_t_max == Some(0) {
            return invalid("epsilon_t_max must be at least 1".into());
        }
        if !(self.trajectory.cluster_radius > 0.0) {
            return invalid("cluster_radius must be positive".into());
        }
        if self.network.hidden.contains(&0) {
            return invalid("hidden layer widths must be positive".into());
        }
        match &self.data {
            DataConfig::Synthetic {
                sigma,
                pool_size,
                eval_size,
                ..
            } => {
                if !(*sigma > 0.0) {
                    return invalid(format!("sigma must be positive, got {sigma}"));
                }
                if *pool_size == 0 || *eval_size == 0 {
                    return invalid("pool_size and eval_size must be positive".into());
                }
            }
            DataConfig::Csv { .. } => {}
        }
        Ok(())
    }

    /// Temperature used by the training rule and the trajectory at `epoch`.
    pub fn temperature_at(&self, epoch: usize) -> Temperature {
        match self.trainer.method {
            Method::Amcl => self.schedule.map_or(Temperature::HARD, |s| s.temperature_at(epoch)),
            Method::Mcl => Temperature::HARD,
            Method::Relaxed | Method::RelaxedAnnealed => Temperature {
                value: 0.0,
                hard_wta: self.epsilon_at(epoch) == 0.0,
            },
        }
    }

    pub fn epsilon_at(&self, epoch: usize) -> f64 {
        let e0 = self.trainer.epsilon.unwrap_or(0.0);
        match self.trainer.method {
            Method::Relaxed => e0,
            Method::RelaxedAnnealed => epsilon_at(e0, epoch, self.trainer.epsilon_t_max.unwrap_or(self.trainer.epochs)),
            _ => 0.0,
        }
    }

    pub fn rule_at(&self, epoch: usize) -> AssignmentRule {
        match self.trainer.method {
            Method::Mcl => AssignmentRule::Hard,
            Method::Amcl => {
                let t = self.temperature_at(epoch);
                if t.hard_wta {
                    AssignmentRule::Hard
                } else {
                    AssignmentRule::Boltzmann { temperature: t.value }
                }
            }
            Method::Relaxed | Method::RelaxedAnnealed => AssignmentRule::Relaxed {
                epsilon: self.epsilon_at(epoch),
            },
        }
    }
}

/// Independent random streams, so that changing the method never shifts the data.
mod streams {
    pub const INIT: u64 = 0;
    pub const DATA: u64 = 1;
    pub const SHUFFLE: u64 = 2;
    pub const EVAL: u64 = 3;
}

/// Where each epoch's samples come from.
#[derive(Debug, Clone)]
pub enum TrainData {
    Fresh {
        spec: SyntheticSpec,
        pool_size: usize,
        rng: SeededRng,
    },
    Fixed(Dataset),
}

impl TrainData {
    fn next_epoch(&mut self) -> Result<Dataset> {
        match self {
            TrainData::Fresh { spec, pool_size, rng } => sample_synthetic(spec, *pool_size, rng),
            TrainData::Fixed(d) => Ok(d.clone()),
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            TrainData::Fresh { spec, .. } => spec.input_dim(),
            TrainData::Fixed(d) => d.input_dim(),
        }
    }

    pub fn target_dim(&self) -> usize {
        match self {
            TrainData::Fresh { spec, .. } => spec.target_dim(),
            TrainData::Fixed(d) => d.target_dim(),
        }
    }
}

/// Training source and validation set derived from a config.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub train: TrainData,
    pub eval: Dataset,
}

pub fn prepare_data(config: &TrainConfig) -> Result<PreparedData> {
    match &config.data {
        DataConfig::Synthetic {
            kind,
            sigma,
            pool_size,
            fixed_pool,
            eval_size,
        } => {
            let spec = SyntheticSpec::new(*kind, *sigma)?;
            let mut rng = SeededRng::stream(config.seed, streams::DATA);
            let eval = sample_synthetic(&spec, *eval_size, &mut SeededRng::stream(config.seed, streams::EVAL))?;
            let train = if *fixed_pool {
                TrainData::Fixed(sample_synthetic(&spec, *pool_size, &mut rng)?)
            } else {
                TrainData::Fresh {
                    spec,
                    pool_size: *pool_size,
                    rng,
                }
            };
            Ok(PreparedData { train, eval })
        }
        DataConfig::Csv { path, targets, fold } => {
            let (train, test) = load_csv(path, targets, fold)?;
            Ok(PreparedData {
                train: TrainData::Fixed(train),
                eval: test,
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub bank: HypothesisBank,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Final metrics on the validation set at the last recorded temperature.
    pub report: EvalReport,
    pub eval: Dataset,
}

pub fn train(config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    let data = prepare_data(config)?;
    train_on(config, data)
}

/// Trains on already prepared data; `config.data` is ignored.
pub fn train_on(config: &TrainConfig, data: PreparedData) -> Result<TrainOutcome> {
    config.validate()?;
    let PreparedData { mut train, eval } = data;
    if eval.input_dim() != train.input_dim() || eval.target_dim() != train.target_dim() {
        return Err(Error::Shape("training and validation data differ in dimension".into()));
    }
    let t = &config.trainer;
    let arch = Architecture {
        input_dim: train.input_dim(),
        hidden: config.network.hidden.clone(),
        n_hypotheses: t.n_hypotheses,
        output_dim: train.target_dim(),
        output_activation: config.network.output_activation,
    };
    let mut bank = HypothesisBank::new(arch, config.network.init, &mut SeededRng::stream(config.seed, streams::INIT))?;
    let mut optimizer = Optimizer::new(t.optimizer, t.learning_rate, &bank);
    let mut shuffle = SeededRng::stream(config.seed, streams::SHUFFLE);

    let probe = config.trajectory.probe_input.clone().unwrap_or_else(|| eval.input(0).to_vec());
    let mut recorder = TrajectoryRecorder::new(eval, probe, config.trajectory.cluster_radius)?;

    let mut grads = Gradients::zeros_like(&bank);
    let mut tape = Tape::default();
    let mut d_scores = vec![0.0; t.n_hypotheses];
    for epoch in 0..t.epochs {
        if epoch % t.eval_every == 0 {
            recorder.record(&bank, epoch, config.temperature_at(epoch))?;
        }
        let rule = config.rule_at(epoch);
        let pool = train.next_epoch()?;
        let mut order: Vec<usize> = (0..pool.len()).collect();
        shuffle.shuffle(&mut order);
        for (batch, rows) in order.chunks(t.batch_size).enumerate() {
            grads.clear();
            let abort = |reason: String| Error::Training { epoch, batch, reason };
            for &i in rows {
                bank.forward_into(pool.input(i), &mut tape)?;
                let loss = rule.loss(tape.hypotheses(), pool.target(i), tape.scores())?;
                if !loss.total().is_finite() {
                    return Err(abort(format!("non-finite loss on sample {i}")));
                }
                for (d, g) in d_scores.iter_mut().zip(&loss.d_scores) {
                    *d = t.scoring_weight * g;
                }
                bank.backward_into(&tape, &loss.d_hypotheses, &d_scores, &mut grads)?;
            }
            grads.scale(1.0 / rows.len() as f64);
            optimizer.step(&mut bank, &grads).map_err(|e| abort(e.to_string()))?;
        }
        log::debug!("epoch {epoch} done ({rule:?})");
    }
    let final_temperature = config.temperature_at(t.epochs);
    recorder.record(&bank, t.epochs, final_temperature)?;
    let eval = recorder.eval_set().clone();
    let report = evaluate(&bank, &eval, Some(if final_temperature.hard_wta { 0.0 } else { final_temperature.value }))?;
    Ok(TrainOutcome {
        bank,
        trajectory: recorder.into_points(),
        report,
        eval,
    })
}

/// Full metric report, in original units when the dataset was standardised.
///
/// Soft quantities use `temperature` (hard assignment when absent or zero).
/// With a standardisation record the temperature refers to model units, so
/// the soft quantities are computed there while distortion and RMSE are
/// reported in original units.
pub fn evaluate(bank: &HypothesisBank, dataset: &Dataset, temperature: Option<f64>) -> Result<EvalReport> {
    let t = temperature.unwrap_or(0.0);
    let model = Predictions::from_bank(bank, dataset, Scale::Model)?.report(t, Scale::Model)?;
    if dataset.standardization().is_none() {
        return Ok(model);
    }
    let original = Predictions::from_bank(bank, dataset, Scale::Original)?;
    Ok(EvalReport {
        hard_distortion: original.hard_distortion(),
        rmse: original.rmse()?,
        scale: Scale::Original,
        ..model
    })
}
