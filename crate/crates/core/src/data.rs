//! Synthetic conditional datasets, CSV ingestion with train-fold
//! standardisation, and fold management.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Matrix, SeededRng};

/// Per-column affine map fitted on a training fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub input_mean: Vec<f64>,
    pub input_std: Vec<f64>,
    pub target_mean: Vec<f64>,
    pub target_std: Vec<f64>,
    /// Columns whose training variance was zero; their std was clamped to 1.
    pub degenerate_inputs: Vec<bool>,
    pub degenerate_targets: Vec<bool>,
}

fn column_stats(m: &Matrix) -> (Vec<f64>, Vec<f64>, Vec<bool>) {
    let n = m.rows() as f64;
    let mut mean = vec![0.0; m.cols()];
    for row in m.iter_rows() {
        for (a, v) in mean.iter_mut().zip(row) {
            *a += v;
        }
    }
    mean.iter_mut().for_each(|a| *a /= n);
    let mut var = vec![0.0; m.cols()];
    for row in m.iter_rows() {
        for ((a, v), mu) in var.iter_mut().zip(row).zip(&mean) {
            *a += (v - mu) * (v - mu);
        }
    }
    let mut degenerate = vec![false; m.cols()];
    let std = var
        .iter()
        .zip(degenerate.iter_mut())
        .map(|(v, flag)| {
            let s = (v / n).sqrt();
            if s > 0.0 {
                s
            } else {
                *flag = true;
                1.0
            }
        })
        .collect();
    (mean, std, degenerate)
}

fn affine_rows(m: &Matrix, mean: &[f64], std: &[f64], forward: bool) -> Matrix {
    let mut out = m.clone();
    for i in 0..out.rows() {
        for ((v, mu), s) in out.row_mut(i).iter_mut().zip(mean).zip(std) {
            *v = if forward { (*v - mu) / s } else { mu + s * *v };
        }
    }
    out
}

impl Standardization {
    pub fn fit(inputs: &Matrix, targets: &Matrix) -> Self {
        let (input_mean, input_std, degenerate_inputs) = column_stats(inputs);
        let (target_mean, target_std, degenerate_targets) = column_stats(targets);
        Self {
            input_mean,
            input_std,
            target_mean,
            target_std,
            degenerate_inputs,
            degenerate_targets,
        }
    }

    pub fn has_degenerate_columns(&self) -> bool {
        self.degenerate_inputs.iter().chain(&self.degenerate_targets).any(|f| *f)
    }

    pub fn standardize_target(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.target_mean.len() {
            return Err(Error::Shape(format!(
                "target has dimension {}, record has {}",
                y.len(),
                self.target_mean.len()
            )));
        }
        Ok(y.iter()
            .zip(&self.target_mean)
            .zip(&self.target_std)
            .map(|((v, m), s)| (v - m) / s)
            .collect())
    }
}

/// Maps a model-space prediction back to original target units.
pub fn destandardize_prediction(pred: &[f64], record: &Standardization) -> Result<Vec<f64>> {
    if pred.len() != record.target_mean.len() {
        return Err(Error::Shape(format!(
            "prediction has dimension {}, record has {}",
            pred.len(),
            record.target_mean.len()
        )));
    }
    Ok(pred
        .iter()
        .zip(&record.target_mean)
        .zip(&record.target_std)
        .map(|((p, m), s)| m + s * p)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    inputs: Matrix,
    targets: Matrix,
    standardization: Option<Standardization>,
}

impl Dataset {
    pub fn new(inputs: Matrix, targets: Matrix) -> Result<Self> {
        if inputs.rows() == 0 {
            return Err(Error::Degenerate("dataset needs at least one sample".into()));
        }
        if inputs.rows() != targets.rows() {
            return Err(Error::Shape(format!(
                "{} inputs but {} targets",
                inputs.rows(),
                targets.rows()
            )));
        }
        Ok(Self {
            inputs,
            targets,
            standardization: None,
        })
    }

    /// Builds a dataset with constant input `x = 1` for every target.
    pub fn unconditional(targets: Matrix) -> Result<Self> {
        let inputs = Matrix::from_vec(targets.rows(), 1, vec![1.0; targets.rows()])?;
        Self::new(inputs, targets)
    }

    pub fn len(&self) -> usize {
        self.inputs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn input(&self, i: usize) -> &[f64] {
        self.inputs.row(i)
    }

    pub fn target(&self, i: usize) -> &[f64] {
        self.targets.row(i)
    }

    pub fn inputs(&self) -> &Matrix {
        &self.inputs
    }

    pub fn targets(&self) -> &Matrix {
        &self.targets
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.targets.cols()
    }

    pub fn standardization(&self) -> Option<&Standardization> {
        self.standardization.as_ref()
    }

    /// Targets in original units.
    pub fn original_target(&self, i: usize) -> Vec<f64> {
        match &self.standardization {
            Some(r) => destandardize_prediction(self.target(i), r).expect("record matches dataset"),
            None => self.target(i).to_vec(),
        }
    }

    fn standardized_with(&self, record: &Standardization) -> Self {
        Self {
            inputs: affine_rows(&self.inputs, &record.input_mean, &record.input_std, true),
            targets: affine_rows(&self.targets, &record.target_mean, &record.target_std, true),
            standardization: Some(record.clone()),
        }
    }

    fn subset(&self, rows: &[usize]) -> Result<Self> {
        let pick = |m: &Matrix| {
            let data: Vec<f64> = rows.iter().flat_map(|&r| m.row(r).iter().copied()).collect();
            Matrix::from_vec(rows.len(), m.cols(), data)
        };
        Self::new(pick(&self.inputs)?, pick(&self.targets)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticKind {
    /// Equal mixture of three 2-D Gaussians; the input is the constant 1.
    ThreeGaussians,
    /// `p(y|x) = ⅓ Σ N(x·μᵢ, σ²)` with `x ~ U[0, 1]`.
    ConditionalThreeGaussians,
    /// 1-D Gaussian `N(0, σ²)` with constant input.
    SingleGaussian1d,
    /// Balanced fixture with targets ±1.
    TwoPoint,
}

pub const MIXTURE_MEANS: [[f64; 2]; 3] = [[-0.5, -0.5], [0.0, 0.5], [0.5, -0.5]];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
}

fn default_sigma() -> f64 {
    0.1
}

impl SyntheticSpec {
    pub fn new(kind: SyntheticKind, sigma: f64) -> Result<Self> {
        let spec = Self { kind, sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::Validation(format!("sigma must be positive, got {}", self.sigma)));
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        1
    }

    pub fn target_dim(&self) -> usize {
        match self.kind {
            SyntheticKind::ThreeGaussians | SyntheticKind::ConditionalThreeGaussians => 2,
            SyntheticKind::SingleGaussian1d | SyntheticKind::TwoPoint => 1,
        }
    }

    /// Whether the target distribution depends on the input.
    pub fn is_conditional(&self) -> bool {
        self.kind == SyntheticKind::ConditionalThreeGaussians
    }

    /// Draws one target at input `x`; `index` orders the two-point fixture.
    fn draw_target(&self, x: f64, index: usize, rng: &mut SeededRng, out: &mut Vec<f64>) {
        match self.kind {
            SyntheticKind::ThreeGaussians | SyntheticKind::ConditionalThreeGaussians => {
                let scale = if self.is_conditional() { x } else { 1.0 };
                let mu = MIXTURE_MEANS[rng.below(3)];
                out.push(scale * mu[0] + self.sigma * rng.normal());
                out.push(scale * mu[1] + self.sigma * rng.normal());
            }
            SyntheticKind::SingleGaussian1d => out.push(self.sigma * rng.normal()),
            SyntheticKind::TwoPoint => out.push(if index.is_multiple_of(2) { -1.0 } else { 1.0 }),
        }
    }

    /// Samples `n` targets from `p(y | x)` at a fixed input.
    pub fn sample_at(&self, x: f64, n: usize, rng: &mut SeededRng) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                let mut y = Vec::with_capacity(2);
                self.draw_target(x, i, rng, &mut y);
                y
            })
            .collect()
    }
}

/// Samples `n` input/target pairs.
pub fn sample_synthetic(spec: &SyntheticSpec, n: usize, rng: &mut SeededRng) -> Result<Dataset> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Degenerate("cannot sample an empty dataset".into()));
    }
    let mut inputs = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(n * spec.target_dim());
    for i in 0..n {
        let x = if spec.is_conditional() { rng.uniform() } else { 1.0 };
        inputs.push(x);
        spec.draw_target(x, i, rng, &mut targets);
    }
    Dataset::new(
        Matrix::from_vec(n, 1, inputs)?,
        Matrix::from_vec(n, spec.target_dim(), targets)?,
    )
}

/// Which CSV columns are targets; all remaining columns are inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnSelector {
    Names(Vec<String>),
    Last(usize),
}

/// How rows are split between train and test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FoldSpec {
    /// Deterministic shuffle keyed by `(name, fold)`; the first
    /// `round(test_fraction · N)` shuffled rows form the test set.
    Shuffled {
        name: String,
        fold: usize,
        #[serde(default = "default_test_fraction")]
        test_fraction: f64,
    },
    /// The last `count` rows are the test set.
    LastRows { count: usize },
    /// Explicit zero-based test row indices, e.g. from official split files.
    TestRows { rows: Vec<usize> },
}

fn default_test_fraction() -> f64 {
    0.1
}

fn fold_seed(name: &str, fold: usize) -> u64 {
    // FNV-1a, stable across platforms and releases
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes().chain((fold as u64).to_le_bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl FoldSpec {
    /// Zero-based test rows for a table of `n` rows.
    pub fn test_rows(&self, n: usize) -> Result<Vec<usize>> {
        let mut rows = match self {
            FoldSpec::Shuffled {
                name,
                fold,
                test_fraction,
            } => {
                if !(*test_fraction > 0.0 && *test_fraction < 1.0) {
                    return Err(Error::Validation(format!(
                        "test_fraction must lie in (0, 1), got {test_fraction}"
                    )));
                }
                let mut order: Vec<usize> = (0..n).collect();
                SeededRng::new(fold_seed(name, *fold)).shuffle(&mut order);
                let n_test = ((n as f64) * test_fraction).round().max(1.0) as usize;
                order.truncate(n_test.min(n));
                order
            }
            FoldSpec::LastRows { count } => (n.saturating_sub(*count)..n).collect(),
            FoldSpec::TestRows { rows } => {
                if let Some(r) = rows.iter().find(|&&r| r >= n) {
                    return Err(Error::Validation(format!("test row {r} out of range for {n} rows")));
                }
                rows.clone()
            }
        };
        rows.sort_unstable();
        rows.dedup();
        Ok(rows)
    }
}

/// Reads a headered, comma-separated table and splits it into standardised
/// train and test sets. Statistics come from the train rows only.
pub fn load_csv(path: &Path, targets: &ColumnSelector, fold: &FoldSpec) -> Result<(Dataset, Dataset)> {
    let csv_err = |message: String| Error::Csv {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(e.to_string()))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_err(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let n_cols = header.len();
    let target_cols: Vec<usize> = match targets {
        ColumnSelector::Names(names) => names
            .iter()
            .map(|name| {
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| csv_err(format!("no target column named {name:?}")))
            })
            .collect::<Result<_>>()?,
        ColumnSelector::Last(k) => {
            if *k == 0 || *k >= n_cols {
                return Err(csv_err(format!("cannot take {k} target columns from {n_cols}")));
            }
            (n_cols - k..n_cols).collect()
        }
    };
    if target_cols.is_empty() {
        return Err(csv_err("no target columns selected".into()));
    }
    let input_cols: Vec<usize> = (0..n_cols).filter(|c| !target_cols.contains(c)).collect();
    if input_cols.is_empty() {
        return Err(csv_err("no input columns left".into()));
    }

    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut bad_rows = Vec::new();
    let mut n_rows = 0;
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_err(format!("row {row}: {e}")))?;
        n_rows += 1;
        let parsed: Option<Vec<f64>> = (0..n_cols)
            .map(|c| {
                record
                    .get(c)
                    .and_then(|cell| cell.parse::<f64>().ok())
                    .filter(|v| v.is_finite())
            })
            .collect();
        match parsed {
            Some(values) => {
                inputs.extend(input_cols.iter().map(|&c| values[c]));
                outputs.extend(target_cols.iter().map(|&c| values[c]));
            }
            None => bad_rows.push(row),
        }
    }
    if !bad_rows.is_empty() {
        return Err(Error::BadRows {
            path: path.to_path_buf(),
            rows: bad_rows,
        });
    }
    if n_rows == 0 {
        return Err(Error::Degenerate(format!("{} has no data rows", path.display())));
    }
    let all = Dataset::new(
        Matrix::from_vec(n_rows, input_cols.len(), inputs)?,
        Matrix::from_vec(n_rows, target_cols.len(), outputs)?,
    )?;

    let test_rows = fold.test_rows(n_rows)?;
    let train_rows: Vec<usize> = (0..n_rows).filter(|r| test_rows.binary_search(r).is_err()).collect();
    if train_rows.is_empty() {
        return Err(Error::Degenerate("empty train fold".into()));
    }
    if test_rows.is_empty() {
        return Err(Error::Degenerate("empty test fold".into()));
    }
    let train = all.subset(&train_rows)?;
    let test = all.subset(&test_rows)?;
    let record = Standardization::fit(&train.inputs, &train.targets);
    if record.has_degenerate_columns() {
        log::warn!(
            "{}: zero-variance columns in the train fold; std clamped to 1",
            path.display()
        );
    }
    Ok((train.standardized_with(&record), test.standardized_with(&record)))
}
