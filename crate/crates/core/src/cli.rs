//! Command-line front end: `train`, `sweep`, `diagnose` and `bench-match`.
//!
//! Exit status is 0 on success, 1 for configuration or usage errors and 2
//! for runtime failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::{awta_match_loss, mcl_match_loss, pit_loss_with, MatchInstance, PitMode, EXHAUSTIVE_AUTO_LIMIT};
use crate::data::SyntheticSpec;
use crate::diagnostics::{global_bound, probe_grid, write_trajectory_csv, GlobalBound};
use crate::error::{Error, Result};
use crate::metrics::EvalReport;
use crate::numerics::SeededRng;
use crate::schedulers::ScheduleSpec;
use crate::trainer::{train, DataConfig, NetworkConfig, TrainConfig, TrainOutcome, TrainerSettings, TrajectoryConfig};

/// Environment variable naming the default output root.
pub const OUT_DIR_ENV: &str = "AMCL_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "amcl", version, about = "Annealed multiple choice learning experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML experiment file (a run's manifest.json is accepted too).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the top-level seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to `$AMCL_OUT_DIR/<command>` or `runs/<command>`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dotted-path override such as `trainer.epochs=10`; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train one model and write trajectory, evaluation, checkpoint and manifest.
    Train(Common),
    /// Repeat a training run over seeds or initial temperatures.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        axis: Option<SweepAxis>,
        /// Comma-separated values for the axis.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Option<Vec<f64>>,
    },
    /// Covariance, critical temperature and distortion ceiling per probed input.
    Diagnose {
        #[command(flatten)]
        common: Common,
        /// Comma-separated probe inputs.
        #[arg(long, value_delimiter = ',')]
        probes: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Time and compare set-matching losses on random instances.
    BenchMatch {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Seed,
    T0,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseConfig {
    /// Explicit probe inputs; when absent an even grid of `probe_count` points on [0, 1].
    #[serde(default)]
    pub probes: Option<Vec<f64>>,
    #[serde(default = "default_probe_count")]
    pub probe_count: usize,
    #[serde(default = "default_samples_per_probe")]
    pub samples_per_probe: usize,
}

fn default_probe_count() -> usize {
    11
}
fn default_samples_per_probe() -> usize {
    1000
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        Self {
            probes: None,
            probe_count: default_probe_count(),
            samples_per_probe: default_samples_per_probe(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default = "default_bench_m")]
    pub m: Vec<usize>,
    /// Prediction counts; empty means `n = m`.
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_bench_dim")]
    pub dim: usize,
    #[serde(default = "default_bench_temperature")]
    pub temperature: f64,
    /// Timed repetitions per strategy and trial.
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
}

fn default_bench_m() -> Vec<usize> {
    vec![2, 4, 6, 8]
}
fn default_trials() -> usize {
    100
}
fn default_bench_dim() -> usize {
    2
}
fn default_bench_temperature() -> f64 {
    0.1
}
fn default_repetitions() -> usize {
    20
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            m: default_bench_m(),
            n: Vec::new(),
            trials: default_trials(),
            dim: default_bench_dim(),
            temperature: default_bench_temperature(),
            repetitions: default_repetitions(),
        }
    }
}

/// The experiment file: one table per concern.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub trainer: Option<TrainerSettings>,
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub network: Option<NetworkConfig>,
    #[serde(default)]
    pub data: Option<DataConfig>,
    #[serde(default)]
    pub trajectory: Option<TrajectoryConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub diagnose: Option<DiagnoseConfig>,
    #[serde(default)]
    pub bench: Option<BenchConfig>,
}

impl ExperimentConfig {
    pub fn train_config(&self) -> Result<TrainConfig> {
        let trainer = self
            .trainer
            .clone()
            .ok_or_else(|| Error::Config("missing [trainer] table".into()))?;
        let data = self.data.clone().ok_or_else(|| Error::Config("missing [data] table".into()))?;
        let config = TrainConfig {
            seed: self.seed,
            trainer,
            schedule: self.schedule,
            network: self.network.clone().unwrap_or_default(),
            data,
            trajectory: self.trajectory.clone().unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }
}

impl From<&TrainConfig> for ExperimentConfig {
    fn from(c: &TrainConfig) -> Self {
        Self {
            seed: c.seed,
            trainer: Some(c.trainer.clone()),
            schedule: c.schedule,
            network: Some(c.network.clone()),
            data: Some(c.data.clone()),
            trajectory: Some(c.trajectory.clone()),
            ..Self::default()
        }
    }
}

/// Parses `key.path=value`, reading the value as TOML and falling back to a string.
fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{spec}` is not of the form key=value")))?;
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("override key `{key}` is malformed")));
    }
    let mut cursor = table;
    for part in &parts[..parts.len() - 1] {
        let entry = cursor
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cursor = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override `{key}`: `{part}` is not a table")))?;
    }
    cursor.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// Loads an experiment file, applies overrides and the seed flag, and makes
/// relative dataset paths absolute with respect to the file's directory.
pub fn load_experiment(path: Option<&Path>, overrides: &[String], seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut table = match path {
        None => toml::Table::new(),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read config {}: {e}", p.display())))?;
            if p.extension().is_some_and(|e| e == "json") {
                let manifest: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                let config = manifest
                    .get("config")
                    .ok_or_else(|| Error::Config(format!("{} has no `config` entry", p.display())))?;
                let parsed: ExperimentConfig =
                    serde_json::from_value(config.clone()).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                toml::Table::try_from(parsed).map_err(|e| Error::Config(e.to_string()))?
            } else {
                text.parse::<toml::Table>()
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
            }
        }
    };
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let mut config: ExperimentConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(format!("{}: {e}", path.map_or("<defaults>".into(), |p| p.display().to_string()))))?;
    if let Some(s) = seed {
        config.seed = s;
    }
    if let (Some(DataConfig::Csv { path: csv, .. }), Some(base)) = (config.data.as_mut(), path.and_then(Path::parent)) {
        if csv.is_relative() {
            *csv = base.join(&*csv);
        }
    }
    Ok(config)
}

fn output_dir(explicit: &Option<PathBuf>, command: &str) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .map_or_else(|| PathBuf::from("runs"), PathBuf::from)
            .join(command)
    })
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    wall_time_seconds: f64,
    artifacts: [&'a str; 5],
    report: &'a EvalReport,
    config: ExperimentConfig,
}

/// Trains and writes `trajectory.csv`, `eval.csv`, `checkpoint`, `config.toml`
/// and `manifest.json` into `dir`.
pub fn run_training(config: &TrainConfig, dir: &Path) -> Result<TrainOutcome> {
    create_dir(dir)?;
    let started = Instant::now();
    let outcome = train(config)?;
    let wall = started.elapsed().as_secs_f64();

    let mut csv = Vec::new();
    write_trajectory_csv(&mut csv, &outcome.trajectory).map_err(|e| Error::io(dir.join("trajectory.csv"), e))?;
    write_file(&dir.join("trajectory.csv"), &csv)?;
    write_file(
        &dir.join("eval.csv"),
        format!("{}\n{}\n", EvalReport::CSV_HEADER, outcome.report.csv_row()).as_bytes(),
    )?;
    outcome.bank.save(&dir.join("checkpoint"))?;
    let echo = ExperimentConfig::from(config);
    let toml_text = toml::to_string(&echo).map_err(|e| Error::Config(e.to_string()))?;
    write_file(&dir.join("config.toml"), toml_text.as_bytes())?;
    let manifest = Manifest {
        command: "train",
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        wall_time_seconds: wall,
        artifacts: ["trajectory.csv", "eval.csv", "checkpoint", "config.toml", "manifest.json"],
        report: &outcome.report,
        config: echo,
    };
    let json = serde_json::to_vec_pretty(&manifest).map_err(|e| Error::Config(e.to_string()))?;
    write_file(&dir.join("manifest.json"), &json)?;
    Ok(outcome)
}

fn cmd_train(common: &Common) -> Result<()> {
    let experiment = load_experiment(common.config.as_deref(), &common.overrides, common.seed)?;
    let config = experiment.train_config()?;
    let dir = output_dir(&common.out, "train");
    let outcome = run_training(&config, &dir)?;
    println!("{}", EvalReport::CSV_HEADER);
    println!("{}", outcome.report.csv_row());
    println!("artifacts written to {}", dir.display());
    Ok(())
}

fn format_value(axis: SweepAxis, v: f64) -> String {
    match axis {
        SweepAxis::Seed => format!("{}", v as u64),
        SweepAxis::T0 => format!("{v}"),
    }
}

/// Runs one training per value, writing `<dir>/<axis>-<value>/` and `summary.csv`.
///
/// Returns the number of failed runs.
pub fn run_sweep(base: &TrainConfig, axis: SweepAxis, values: &[f64], dir: &Path) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    let mut configs = Vec::with_capacity(values.len());
    for &v in values {
        let mut c = base.clone();
        match axis {
            SweepAxis::Seed => {
                if v < 0.0 || v.fract() != 0.0 {
                    return Err(Error::Config(format!("seed values must be non-negative integers, got {v}")));
                }
                c.seed = v as u64;
            }
            SweepAxis::T0 => {
                let s = c
                    .schedule
                    .as_mut()
                    .ok_or_else(|| Error::Config("a T0 sweep needs a [schedule] table".into()))?;
                s.t0 = v;
            }
        }
        c.validate()?;
        configs.push((v, c));
    }
    create_dir(dir)?;
    let axis_name = match axis {
        SweepAxis::Seed => "seed",
        SweepAxis::T0 => "t0",
    };
    let results: Vec<(f64, Result<TrainOutcome>)> = configs
        .into_par_iter()
        .map(|(v, c)| {
            let run_dir = dir.join(format!("{axis_name}-{}", format_value(axis, v)));
            (v, run_training(&c, &run_dir))
        })
        .collect();
    let mut summary = format!("{axis_name},status,{},error\n", EvalReport::CSV_HEADER);
    let mut failures = 0;
    for (v, r) in &results {
        match r {
            Ok(o) => summary.push_str(&format!("{},ok,{},\n", format_value(axis, *v), o.report.csv_row())),
            Err(e) => {
                failures += 1;
                log::error!("run {axis_name}={v} failed: {e}");
                let blanks = ",".repeat(EvalReport::CSV_HEADER.matches(',').count());
                let msg = e.to_string().replace(['"', '\n'], " ");
                summary.push_str(&format!("{},failed,{blanks},\"{msg}\"\n", format_value(axis, *v)));
            }
        }
    }
    write_file(&dir.join("summary.csv"), summary.as_bytes())?;
    print!("{summary}");
    Ok(failures)
}

fn cmd_sweep(common: &Common, axis: Option<SweepAxis>, values: Option<Vec<f64>>) -> Result<usize> {
    let experiment = load_experiment(common.config.as_deref(), &common.overrides, common.seed)?;
    let base = experiment.train_config()?;
    let axis = axis
        .or(experiment.sweep.as_ref().map(|s| s.axis))
        .ok_or_else(|| Error::Config("no sweep axis given (--axis or [sweep].axis)".into()))?;
    let values = values
        .or(experiment.sweep.as_ref().map(|s| s.values.clone()))
        .unwrap_or_default();
    run_sweep(&base, axis, &values, &output_dir(&common.out, "sweep"))
}

/// Header of `diagnostics.csv`.
pub const DIAGNOSTICS_HEADER: &str = "x,samples,lambda_max,critical_temperature,d_max";

/// Samples each probe and writes `diagnostics.csv` and `diagnostics.json`.
pub fn run_diagnose(spec: &SyntheticSpec, probes: &[f64], samples: usize, seed: u64, dir: &Path) -> Result<GlobalBound> {
    if probes.is_empty() {
        return Err(Error::Config("diagnose needs at least one probe".into()));
    }
    let bound = global_bound(spec, probes, samples, &mut SeededRng::new(seed))?;
    create_dir(dir)?;
    let mut csv = format!("{DIAGNOSTICS_HEADER}\n");
    for p in &bound.probes {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            p.x, p.report.samples, p.report.lambda_max, p.report.critical_temperature, p.report.d_max
        ));
    }
    write_file(&dir.join("diagnostics.csv"), csv.as_bytes())?;
    let json = serde_json::to_vec_pretty(&bound).map_err(|e| Error::Config(e.to_string()))?;
    write_file(&dir.join("diagnostics.json"), &json)?;
    print!("{csv}");
    match bound.bound {
        Some(b) => println!("global bound 2 max_x lambda_max = {b}"),
        None => println!("no probe had enough samples"),
    }
    Ok(bound)
}

fn cmd_diagnose(common: &Common, probes: Option<Vec<f64>>, samples: Option<usize>) -> Result<()> {
    let experiment = load_experiment(common.config.as_deref(), &common.overrides, common.seed)?;
    let spec = match &experiment.data {
        Some(DataConfig::Synthetic { kind, sigma, .. }) => SyntheticSpec::new(*kind, *sigma)?,
        Some(DataConfig::Csv { .. }) => {
            return Err(Error::Config("diagnose samples p(y|x) and needs a synthetic [data] table".into()))
        }
        None => return Err(Error::Config("missing [data] table".into())),
    };
    let settings = experiment.diagnose.clone().unwrap_or_default();
    let probes = probes
        .or(settings.probes)
        .unwrap_or_else(|| probe_grid(settings.probe_count));
    let samples = samples.unwrap_or(settings.samples_per_probe);
    run_diagnose(&spec, &probes, samples, experiment.seed, &output_dir(&common.out, "diagnose"))?;
    Ok(())
}

/// Header of `bench_match.csv`; timings are nanoseconds per evaluation.
pub const BENCH_HEADER: &str =
    "m,n,trial,mcl,awta,pit_hungarian,pit_exhaustive,mcl_ns,awta_ns,hungarian_ns,exhaustive_ns,note";

/// One row of the matching benchmark. Absent values were not computed.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub m: usize,
    pub n: usize,
    pub trial: usize,
    pub mcl: f64,
    pub awta: f64,
    pub pit_hungarian: Option<f64>,
    pub pit_exhaustive: Option<f64>,
    pub mcl_ns: f64,
    pub awta_ns: f64,
    pub hungarian_ns: Option<f64>,
    pub exhaustive_ns: Option<f64>,
    pub note: &'static str,
}

impl BenchRow {
    fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.m,
            self.n,
            self.trial,
            self.mcl,
            self.awta,
            opt(self.pit_hungarian),
            opt(self.pit_exhaustive),
            self.mcl_ns,
            self.awta_ns,
            opt(self.hungarian_ns),
            opt(self.exhaustive_ns),
            self.note
        )
    }
}

fn time_ns<T>(reps: usize, mut f: impl FnMut() -> T) -> (T, f64) {
    let start = Instant::now();
    let mut out = f();
    for _ in 1..reps {
        out = std::hint::black_box(f());
    }
    (out, start.elapsed().as_nanos() as f64 / reps as f64)
}

pub fn bench_match(config: &BenchConfig, seed: u64) -> Result<Vec<BenchRow>> {
    if config.m.is_empty() || config.m.contains(&0) || config.n.contains(&0) {
        return Err(Error::Config("bench m and n values must be positive".into()));
    }
    if config.trials == 0 || config.dim == 0 || config.repetitions == 0 {
        return Err(Error::Config("trials, dim and repetitions must be positive".into()));
    }
    if !(config.temperature > 0.0) {
        return Err(Error::Config("bench temperature must be positive".into()));
    }
    let mut rng = SeededRng::new(seed);
    let mut rows = Vec::new();
    let reps = config.repetitions;
    for &m in &config.m {
        let ns: Vec<usize> = if config.n.is_empty() { vec![m] } else { config.n.clone() };
        for n in ns {
            for trial in 0..config.trials {
                let inst = MatchInstance::random(n, m, config.dim, &mut rng)?;
                let (mcl, mcl_ns) = time_ns(reps, || mcl_match_loss(&inst));
                let (awta, awta_ns) = time_ns(reps, || awta_match_loss(&inst, config.temperature));
                let mut row = BenchRow {
                    m,
                    n,
                    trial,
                    mcl,
                    awta: awta?,
                    pit_hungarian: None,
                    pit_exhaustive: None,
                    mcl_ns,
                    awta_ns,
                    hungarian_ns: None,
                    exhaustive_ns: None,
                    note: "",
                };
                if n != m {
                    row.note = "pit needs n = m";
                } else {
                    let (h, h_ns) = time_ns(reps, || pit_loss_with(&inst, PitMode::Hungarian));
                    row.pit_hungarian = Some(h?.value);
                    row.hungarian_ns = Some(h_ns);
                    if m <= EXHAUSTIVE_AUTO_LIMIT {
                        let (e, e_ns) = time_ns(reps, || pit_loss_with(&inst, PitMode::Exhaustive));
                        row.pit_exhaustive = Some(e?.value);
                        row.exhaustive_ns = Some(e_ns);
                    } else {
                        row.note = "exhaustive skipped (m > 6)";
                    }
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

fn cmd_bench(common: &Common, m: Option<Vec<usize>>, n: Option<Vec<usize>>, trials: Option<usize>) -> Result<()> {
    let experiment = load_experiment(common.config.as_deref(), &common.overrides, common.seed)?;
    let mut config = experiment.bench.clone().unwrap_or_default();
    if let Some(m) = m {
        config.m = m;
    }
    if let Some(n) = n {
        config.n = n;
    }
    if let Some(t) = trials {
        config.trials = t;
    }
    let rows = bench_match(&config, experiment.seed)?;
    let dir = output_dir(&common.out, "bench-match");
    create_dir(&dir)?;
    let mut csv = format!("{BENCH_HEADER}\n");
    for r in &rows {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    write_file(&dir.join("bench_match.csv"), csv.as_bytes())?;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "m,n,mean_mcl_ns,mean_hungarian_ns,mean_exhaustive_ns,max_mcl_minus_pit");
    for &m in &config.m {
        let group: Vec<&BenchRow> = rows.iter().filter(|r| r.m == m).collect();
        let mean = |f: &dyn Fn(&BenchRow) -> Option<f64>| {
            let v: Vec<f64> = group.iter().filter_map(|r| f(r)).collect();
            if v.is_empty() {
                String::from("-")
            } else {
                format!("{:.0}", v.iter().sum::<f64>() / v.len() as f64)
            }
        };
        let gap = group
            .iter()
            .filter_map(|r| r.pit_hungarian.map(|p| r.mcl - p))
            .fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(
            out,
            "{m},{},{},{},{},{}",
            group.first().map_or(m, |r| r.n),
            mean(&|r| Some(r.mcl_ns)),
            mean(&|r| r.hungarian_ns),
            mean(&|r| r.exhaustive_ns),
            gap
        );
    }
    let _ = writeln!(out, "rows written to {}", dir.join("bench_match.csv").display());
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    if e.is_config_error() {
        1
    } else {
        2
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Train(common) => cmd_train(common),
        Command::Sweep { common, axis, values } => match cmd_sweep(common, *axis, values.clone()) {
            Ok(0) => Ok(()),
            Ok(failed) => {
                eprintln!("error: {failed} sweep run(s) failed");
                return 2;
            }
            Err(e) => Err(e),
        },
        Command::Diagnose { common, probes, samples } => cmd_diagnose(common, probes.clone(), *samples),
        Command::BenchMatch { common, m, n, trials } => cmd_bench(common, m.clone(), n.clone(), *trials),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
