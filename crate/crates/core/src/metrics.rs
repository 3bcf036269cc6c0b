//! Evaluation quantities: hard and soft distortion, free energy, assignment
//! entropy, empirical rate, score-weighted RMSE, the Shannon lower bound, and
//! the Lloyd quantizer used as an independent oracle.
//!
//! Entropies are computed in nats; the rate is reported in bits. A
//! temperature of exactly zero denotes the hard (Voronoi) assignment.

use serde::{Deserialize, Serialize};

use crate::data::{destandardize_prediction, Dataset};
use crate::error::{Error, Result};
use crate::losses::{argmin, hypothesis_losses, softmin};
use crate::network::{HypothesisBank, Tape};
use crate::numerics::{squared_distance, Matrix, SeededRng};

/// Units in which metrics are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// The space the network is trained in (standardised for CSV data).
    Model,
    /// Original target units; identical to `Model` for unstandardised data.
    Original,
}

/// Hypotheses, scores and targets for every sample of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictions {
    n: usize,
    dim: usize,
    hypotheses: Vec<f64>,
    scores: Vec<f64>,
    targets: Vec<f64>,
}

impl Predictions {
    /// Assembles predictions from raw buffers: `hypotheses` is `N × n × d`,
    /// `scores` is `N × n` and `targets` is `N × d`.
    pub fn from_parts(n: usize, dim: usize, hypotheses: Vec<f64>, scores: Vec<f64>, targets: Vec<f64>) -> Result<Self> {
        if n == 0 || dim == 0 {
            return Err(Error::Degenerate("need n >= 1 and d >= 1".into()));
        }
        let samples = targets.len() / dim;
        if samples == 0 || targets.len() != samples * dim || hypotheses.len() != samples * n * dim || scores.len() != samples * n {
            return Err(Error::Shape("prediction buffers are inconsistent".into()));
        }
        Ok(Self {
            n,
            dim,
            hypotheses,
            scores,
            targets,
        })
    }

    /// The same `n` hypotheses (with uniform scores) for every target.
    pub fn shared(codebook: &Matrix, targets: &Matrix) -> Result<Self> {
        if codebook.cols() != targets.cols() {
            return Err(Error::Shape("codebook and targets differ in dimension".into()));
        }
        let samples = targets.rows();
        let n = codebook.rows();
        let hypotheses = (0..samples).flat_map(|_| codebook.as_slice().iter().copied()).collect();
        Self::from_parts(n, codebook.cols(), hypotheses, vec![1.0 / n as f64; samples * n], targets.as_slice().to_vec())
    }

    pub fn from_bank(bank: &HypothesisBank, dataset: &Dataset, scale: Scale) -> Result<Self> {
        if bank.output_dim() != dataset.target_dim() {
            return Err(Error::Shape(format!(
                "bank predicts dimension {}, dataset targets have {}",
                bank.output_dim(),
                dataset.target_dim()
            )));
        }
        let n = bank.n_hypotheses();
        let dim = bank.output_dim();
        let record = match scale {
            Scale::Original => dataset.standardization(),
            Scale::Model => None,
        };
        let mut hypotheses = Vec::with_capacity(dataset.len() * n * dim);
        let mut scores = Vec::with_capacity(dataset.len() * n);
        let mut targets = Vec::with_capacity(dataset.len() * dim);
        let mut tape = Tape::default();
        for i in 0..dataset.len() {
            bank.forward_into(dataset.input(i), &mut tape)?;
            match record {
                Some(r) => {
                    for f in tape.hypotheses().chunks_exact(dim) {
                        hypotheses.extend(destandardize_prediction(f, r)?);
                    }
                    targets.extend(dataset.original_target(i));
                }
                None => {
                    hypotheses.extend_from_slice(tape.hypotheses());
                    targets.extend_from_slice(dataset.target(i));
                }
            }
            scores.extend_from_slice(tape.scores());
        }
        Self::from_parts(n, dim, hypotheses, scores, targets)
    }

    pub fn len(&self) -> usize {
        self.targets.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn n_hypotheses(&self) -> usize {
        self.n
    }

    pub fn hypotheses(&self, i: usize) -> &[f64] {
        let stride = self.n * self.dim;
        &self.hypotheses[i * stride..(i + 1) * stride]
    }

    pub fn scores(&self, i: usize) -> &[f64] {
        &self.scores[i * self.n..(i + 1) * self.n]
    }

    pub fn target(&self, i: usize) -> &[f64] {
        &self.targets[i * self.dim..(i + 1) * self.dim]
    }

    fn losses(&self, i: usize) -> Vec<f64> {
        hypothesis_losses(self.hypotheses(i), self.target(i))
    }

    pub fn hard_distortion(&self) -> f64 {
        let total: f64 = (0..self.len())
            .map(|i| {
                let l = self.losses(i);
                l[argmin(&l)]
            })
            .sum();
        total / self.len() as f64
    }

    /// Per-sample assignment statistics at temperature `T ≥ 0`.
    fn thermal(&self, temperature: f64) -> Result<Thermal> {
        if !(temperature >= 0.0) {
            return Err(Error::Domain(format!("temperature must be >= 0, got {temperature}")));
        }
        let mut acc = Thermal {
            soft_distortion: 0.0,
            entropy: 0.0,
            free_energy: 0.0,
            marginal: vec![0.0; self.n],
        };
        for i in 0..self.len() {
            let losses = self.losses(i);
            if temperature == 0.0 {
                let k = argmin(&losses);
                acc.soft_distortion += losses[k];
                acc.free_energy += losses[k];
                acc.marginal[k] += 1.0;
            } else {
                let q = softmin(&losses, temperature)?;
                acc.soft_distortion += q.expected_loss(&losses);
                acc.entropy += q.entropy();
                acc.free_energy += q.free_energy();
                for (m, v) in acc.marginal.iter_mut().zip(&q.q) {
                    *m += v;
                }
            }
        }
        let inv = 1.0 / self.len() as f64;
        acc.soft_distortion *= inv;
        acc.entropy *= inv;
        acc.free_energy *= inv;
        acc.marginal.iter_mut().for_each(|m| *m *= inv);
        Ok(acc)
    }

    pub fn soft_distortion(&self, temperature: f64) -> Result<f64> {
        Ok(self.thermal(temperature)?.soft_distortion)
    }

    pub fn free_energy(&self, temperature: f64) -> Result<f64> {
        Ok(self.thermal(temperature)?.free_energy)
    }

    pub fn mean_entropy(&self, temperature: f64) -> Result<f64> {
        Ok(self.thermal(temperature)?.entropy)
    }

    pub fn empirical_rate(&self, temperature: f64) -> Result<f64> {
        Ok(self.thermal(temperature)?.rate_bits())
    }

    /// RMSE of the score-weighted prediction `Σ γ̄_k f_k`, with `γ̄` the scores
    /// renormalised to sum to one.
    pub fn rmse(&self) -> Result<f64> {
        let mut total = 0.0;
        let mut pred = vec![0.0; self.dim];
        for i in 0..self.len() {
            let scores = self.scores(i);
            let mass: f64 = scores.iter().sum();
            if mass < 1e-12 {
                return Err(Error::Degenerate(format!("scores of sample {i} sum to {mass:e}")));
            }
            pred.iter_mut().for_each(|p| *p = 0.0);
            for (f, s) in self.hypotheses(i).chunks_exact(self.dim).zip(scores) {
                for (p, v) in pred.iter_mut().zip(f) {
                    *p += s / mass * v;
                }
            }
            total += squared_distance(&pred, self.target(i));
        }
        Ok((total / self.len() as f64).sqrt())
    }

    pub fn report(&self, temperature: f64, scale: Scale) -> Result<EvalReport> {
        let thermal = self.thermal(temperature)?;
        Ok(EvalReport {
            temperature,
            hard_distortion: self.hard_distortion(),
            soft_distortion: thermal.soft_distortion,
            rmse: self.rmse()?,
            entropy: thermal.entropy,
            free_energy: thermal.free_energy,
            rate_bits: thermal.rate_bits(),
            samples: self.len(),
            scale,
        })
    }
}

struct Thermal {
    soft_distortion: f64,
    entropy: f64,
    free_energy: f64,
    marginal: Vec<f64>,
}

impl Thermal {
    fn rate_bits(&self) -> f64 {
        let h_marginal = entropy_nats(&self.marginal);
        let n = self.marginal.len() as f64;
        ((h_marginal - self.entropy) / std::f64::consts::LN_2).clamp(0.0, n.log2())
    }
}

pub fn entropy_nats(p: &[f64]) -> f64 {
    -p.iter().filter(|v| **v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}

/// One row of evaluation output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub temperature: f64,
    pub hard_distortion: f64,
    pub soft_distortion: f64,
    pub rmse: f64,
    /// Mean assignment entropy in nats.
    pub entropy: f64,
    pub free_energy: f64,
    pub rate_bits: f64,
    pub samples: usize,
    pub scale: Scale,
}

impl EvalReport {
    pub const CSV_HEADER: &'static str =
        "temperature,hard_distortion,soft_distortion,rmse,entropy,free_energy,rate_bits,samples,scale";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.temperature,
            self.hard_distortion,
            self.soft_distortion,
            self.rmse,
            self.entropy,
            self.free_energy,
            self.rate_bits,
            self.samples,
            match self.scale {
                Scale::Model => "model",
                Scale::Original => "original",
            }
        )
    }
}

fn positive(temperature: f64) -> Result<()> {
    if temperature > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("temperature must be positive, got {temperature}")))
    }
}

/// Mean of `min_k ‖f_k(x) - y‖²` in model units.
pub fn hard_distortion(bank: &HypothesisBank, dataset: &Dataset) -> Result<f64> {
    Ok(Predictions::from_bank(bank, dataset, Scale::Model)?.hard_distortion())
}

/// Mean of `Σ_k q_T,k ‖f_k(x) - y‖²` in model units.
pub fn soft_distortion(bank: &HypothesisBank, dataset: &Dataset, temperature: f64) -> Result<f64> {
    positive(temperature)?;
    Predictions::from_bank(bank, dataset, Scale::Model)?.soft_distortion(temperature)
}

/// `-T · mean log Σ_k exp(-‖f_k(x) - y‖² / T)`.
pub fn free_energy(bank: &HypothesisBank, dataset: &Dataset, temperature: f64) -> Result<f64> {
    positive(temperature)?;
    Predictions::from_bank(bank, dataset, Scale::Model)?.free_energy(temperature)
}

pub fn mean_entropy(bank: &HypothesisBank, dataset: &Dataset, temperature: f64) -> Result<f64> {
    positive(temperature)?;
    Predictions::from_bank(bank, dataset, Scale::Model)?.mean_entropy(temperature)
}

/// RMSE of the renormalised score-weighted prediction, in original units.
pub fn rmse(bank: &HypothesisBank, dataset: &Dataset) -> Result<f64> {
    Predictions::from_bank(bank, dataset, Scale::Original)?.rmse()
}

/// Plug-in mutual information between hypothesis index and target, in bits.
pub fn empirical_rate(bank: &HypothesisBank, dataset: &Dataset, temperature: f64) -> Result<f64> {
    positive(temperature)?;
    Predictions::from_bank(bank, dataset, Scale::Model)?.empirical_rate(temperature)
}

/// Shannon lower bound for a scalar Gaussian source of variance `variance`:
/// `max(0, ½ log₂(σ² / D))` bits.
pub fn shannon_lower_bound(variance: f64, distortion: f64) -> f64 {
    (0.5 * (variance / distortion).log2()).max(0.0)
}

/// Result of a Lloyd run.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub centers: Matrix,
    pub distortion: f64,
    pub iterations: usize,
}

/// One-dimensional Lloyd quantizer started from the `n` mid-quantiles.
///
/// Stops when no center moves by more than `1e-9` or after `iterations` rounds.
pub fn lloyd_oracle(samples: &[f64], n: usize, iterations: usize) -> Result<(Vec<f64>, f64)> {
    if n == 0 {
        return Err(Error::Degenerate("need at least one codeword".into()));
    }
    let mut sorted = samples.to_vec();
    if sorted.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "lloyd samples".into(),
        });
    }
    sorted.sort_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();
    if distinct.len() < n {
        return Err(Error::Degenerate(format!(
            "{} distinct samples cannot support {n} codewords",
            distinct.len()
        )));
    }
    let len = sorted.len();
    let mut codebook: Vec<f64> = (0..n)
        .map(|j| sorted[(((j as f64 + 0.5) / n as f64) * len as f64) as usize])
        .collect();
    codebook.dedup();
    // quantiles can coincide on heavily repeated data; fill from distinct values
    let mut extra = distinct.iter();
    while codebook.len() < n {
        let v = *extra.next().expect("enough distinct samples");
        if !codebook.contains(&v) {
            codebook.push(v);
        }
    }
    codebook.sort_by(f64::total_cmp);

    let points = Matrix::from_vec(len, 1, sorted)?;
    let mut centers = Matrix::from_vec(n, 1, codebook)?;
    lloyd_iterate(&points, &mut centers, iterations);
    let distortion = quantization_distortion(&points, &centers);
    Ok((centers.as_slice().to_vec(), distortion))
}

/// Runs Lloyd iterations in place; returns the number of rounds performed.
pub fn lloyd_iterate(points: &Matrix, centers: &mut Matrix, iterations: usize) -> usize {
    let n = centers.rows();
    let d = centers.cols();
    for round in 0..iterations {
        let mut sums = vec![0.0; n * d];
        let mut counts = vec![0usize; n];
        for p in points.iter_rows() {
            let k = nearest(centers, p);
            counts[k] += 1;
            for (s, v) in sums[k * d..(k + 1) * d].iter_mut().zip(p) {
                *s += v;
            }
        }
        let mut moved: f64 = 0.0;
        for k in 0..n {
            if counts[k] == 0 {
                continue;
            }
            for j in 0..d {
                let next = sums[k * d + j] / counts[k] as f64;
                moved = moved.max((next - centers[(k, j)]).abs());
                centers[(k, j)] = next;
            }
        }
        if moved < 1e-9 {
            return round + 1;
        }
    }
    iterations
}

fn nearest(centers: &Matrix, p: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, c) in centers.iter_rows().enumerate() {
        let dist = squared_distance(c, p);
        if dist < best_d {
            best_d = dist;
            best = k;
        }
    }
    best
}

pub fn quantization_distortion(points: &Matrix, centers: &Matrix) -> f64 {
    points
        .iter_rows()
        .map(|p| squared_distance(centers.row(nearest(centers, p)), p))
        .sum::<f64>()
        / points.rows() as f64
}

/// Multi-dimensional Lloyd with k-means++ seeding, best of `restarts` runs.
pub fn lloyd_codebook(points: &Matrix, n: usize, iterations: usize, restarts: usize, rng: &mut SeededRng) -> Result<Codebook> {
    if n == 0 || points.rows() < n {
        return Err(Error::Degenerate(format!(
            "{} points cannot support {n} codewords",
            points.rows()
        )));
    }
    let mut best: Option<Codebook> = None;
    for _ in 0..restarts.max(1) {
        let mut centers = kmeans_plus_plus(points, n, rng)?;
        let rounds = lloyd_iterate(points, &mut centers, iterations);
        let distortion = quantization_distortion(points, &centers);
        if best.as_ref().is_none_or(|b| distortion < b.distortion) {
            best = Some(Codebook {
                centers,
                distortion,
                iterations: rounds,
            });
        }
    }
    Ok(best.expect("at least one restart"))
}

fn kmeans_plus_plus(points: &Matrix, n: usize, rng: &mut SeededRng) -> Result<Matrix> {
    let d = points.cols();
    let mut chosen = Vec::with_capacity(n * d);
    chosen.extend_from_slice(points.row(rng.below(points.rows())));
    let mut dist: Vec<f64> = points.iter_rows().map(|p| squared_distance(p, &chosen[..d])).collect();
    for _ in 1..n {
        let total: f64 = dist.iter().sum();
        let idx = if total > 0.0 {
            let mut target = rng.uniform() * total;
            let mut pick = dist.len() - 1;
            for (i, w) in dist.iter().enumerate() {
                if target < *w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            rng.below(points.rows())
        };
        let c = points.row(idx).to_vec();
        for (dv, p) in dist.iter_mut().zip(points.iter_rows()) {
            *dv = dv.min(squared_distance(p, &c));
        }
        chosen.extend(c);
    }
    Matrix::from_vec(n, d, chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Architecture, InitScheme, OutputActivation};

    fn preds(codebook: &[Vec<f64>], targets: &[Vec<f64>]) -> Predictions {
        Predictions::shared(&Matrix::from_rows(codebook).unwrap(), &Matrix::from_rows(targets).unwrap()).unwrap()
    }

    fn random_predictions(rng: &mut SeededRng, n: usize, d: usize, samples: usize) -> Predictions {
        let hyps = (0..samples * n * d).map(|_| rng.normal()).collect();
        let scores = (0..samples * n).map(|_| rng.uniform_range(0.01, 0.99)).collect();
        let targets = (0..samples * d).map(|_| rng.normal()).collect();
        Predictions::from_parts(n, d, hyps, scores, targets).unwrap()
    }

    #[test]
    fn hard_distortion_examples() {
        let p = preds(&[vec![0.0]], &[vec![-1.0], vec![1.0]]);
        assert_eq!(p.hard_distortion(), 1.0);
        let p = preds(&[vec![-1.0], vec![1.0]], &[vec![-1.0], vec![1.0]]);
        assert_eq!(p.hard_distortion(), 0.0);
    }

    #[test]
    fn soft_distortion_examples() {
        let mut rng = SeededRng::new(1);
        let one = random_predictions(&mut rng, 1, 2, 30);
        assert!((one.soft_distortion(0.3).unwrap() - one.hard_distortion()).abs() < 1e-15);
        assert_eq!(one.free_energy(0.3).unwrap(), one.soft_distortion(0.3).unwrap());

        let p = random_predictions(&mut rng, 4, 2, 30);
        let uniform: f64 = (0..p.len()).map(|i| p.losses(i).iter().sum::<f64>() / 4.0).sum::<f64>() / p.len() as f64;
        assert!((p.soft_distortion(1e9).unwrap() - uniform).abs() < 1e-6);
        assert!(p.soft_distortion(0.5).unwrap() >= p.hard_distortion());
    }

    #[test]
    fn free_energy_examples() {
        // every hypothesis at the same distance: F = l - T log n
        let p = preds(&[vec![1.0], vec![-1.0], vec![1.0]], &[vec![0.0]]);
        let t = 0.7;
        assert!((p.free_energy(t).unwrap() - (1.0 - t * 3f64.ln())).abs() < 1e-14);
        let mut rng = SeededRng::new(2);
        let p = random_predictions(&mut rng, 5, 3, 40);
        for t in [0.01, 0.3, 2.0] {
            let f = p.free_energy(t).unwrap();
            let identity = p.soft_distortion(t).unwrap() - t * p.mean_entropy(t).unwrap();
            assert!((f - identity).abs() < 1e-10);
        }
    }

    #[test]
    fn rmse_examples() {
        let p = Predictions::from_parts(2, 1, vec![3.0, -7.0], vec![1.0, 0.0], vec![3.0]).unwrap();
        assert_eq!(p.rmse().unwrap(), 0.0);
        let p = Predictions::from_parts(2, 1, vec![3.0, -7.0], vec![0.0, 0.0], vec![3.0]).unwrap();
        assert!(matches!(p.rmse(), Err(Error::Degenerate(_))));

        let mut rng = SeededRng::new(3);
        let sigma = 0.3;
        let targets: Vec<Vec<f64>> = (0..200_000).map(|_| vec![2.0 + sigma * rng.normal()]).collect();
        let p = preds(&[vec![2.0]], &targets);
        assert!((p.rmse().unwrap() - sigma).abs() < 0.02 * sigma);
    }

    #[test]
    fn rate_examples() {
        // hypotheses all equal: q uniform, rate 0
        let p = preds(&[vec![0.0], vec![0.0]], &[vec![-1.0], vec![1.0]]);
        assert!(p.empirical_rate(1.0).unwrap().abs() < 1e-12);
        // deterministic balanced channel over 2 hypotheses
        let p = preds(&[vec![-1.0], vec![1.0]], &[vec![-1.0], vec![1.0]]);
        assert!((p.empirical_rate(1e-4).unwrap() - 1.0).abs() < 1e-9);
        assert!((p.empirical_rate(0.0).unwrap() - 1.0).abs() < 1e-12);
        let p = preds(
            &[vec![-3.0], vec![-1.0], vec![1.0], vec![3.0]],
            &[vec![-3.0], vec![-1.0], vec![1.0], vec![3.0]],
        );
        assert!((p.empirical_rate(0.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rate_bounds_and_hot_limit() {
        let mut rng = SeededRng::new(4);
        let p = random_predictions(&mut rng, 4, 2, 100);
        for t in [0.0, 0.01, 0.1, 1.0, 10.0] {
            let r = p.empirical_rate(t).unwrap();
            assert!((0.0..=2.0).contains(&r));
        }
        assert!(p.empirical_rate(1e9).unwrap() < 1e-6);
    }

    #[test]
    fn slb_examples() {
        assert_eq!(shannon_lower_bound(2.0, 2.0), 0.0);
        assert!((shannon_lower_bound(2.0, 0.5) - 1.0).abs() < 1e-15);
        assert!((shannon_lower_bound(2.0, 0.125) - 2.0).abs() < 1e-15);
        assert_eq!(shannon_lower_bound(1.0, 3.0), 0.0);
    }

    #[test]
    fn lloyd_examples() {
        let (c, d) = lloyd_oracle(&[-1.0, 1.0], 2, 100).unwrap();
        assert_eq!(c, vec![-1.0, 1.0]);
        assert_eq!(d, 0.0);

        let samples = [0.0, 0.0, 4.0];
        let mean = samples.iter().sum::<f64>() / 3.0;
        let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / 3.0;
        let (c, d) = lloyd_oracle(&samples, 1, 100).unwrap();
        assert!((c[0] - 4.0 / 3.0).abs() < 1e-15);
        assert!((d - var).abs() < 1e-12);
        assert!((d - 32.0 / 9.0).abs() < 1e-12);

        assert!(matches!(lloyd_oracle(&[1.0, 1.0, 1.0], 2, 10), Err(Error::Degenerate(_))));
    }

    #[test]
    fn lloyd_multi_dim_recovers_separated_clusters() {
        let mut rng = SeededRng::new(5);
        let centers = [[-5.0, 0.0], [5.0, 0.0], [0.0, 5.0]];
        let pts: Vec<Vec<f64>> = (0..600)
            .map(|i| {
                let c = centers[i % 3];
                vec![c[0] + 0.1 * rng.normal(), c[1] + 0.1 * rng.normal()]
            })
            .collect();
        let m = Matrix::from_rows(&pts).unwrap();
        let cb = lloyd_codebook(&m, 3, 100, 3, &mut rng).unwrap();
        assert!(cb.distortion < 0.03);
    }

    #[test]
    fn bank_wrappers_agree_with_predictions() {
        let mut rng = SeededRng::new(6);
        let arch = Architecture {
            input_dim: 1,
            hidden: vec![8],
            n_hypotheses: 3,
            output_dim: 1,
            output_activation: OutputActivation::Tanh,
        };
        let bank = HypothesisBank::new(arch, InitScheme::HeUniform, &mut rng).unwrap();
        let ds = Dataset::new(
            Matrix::from_vec(4, 1, vec![0.1, 0.5, -0.3, 1.0]).unwrap(),
            Matrix::from_vec(4, 1, vec![0.2, -0.4, 0.9, 0.0]).unwrap(),
        )
        .unwrap();
        let p = Predictions::from_bank(&bank, &ds, Scale::Model).unwrap();
        assert_eq!(hard_distortion(&bank, &ds).unwrap(), p.hard_distortion());
        assert_eq!(soft_distortion(&bank, &ds, 0.2).unwrap(), p.soft_distortion(0.2).unwrap());
        assert!(matches!(soft_distortion(&bank, &ds, 0.0), Err(Error::Domain(_))));
        assert!(matches!(free_energy(&bank, &ds, -1.0), Err(Error::Domain(_))));
        assert!(matches!(empirical_rate(&bank, &ds, 0.0), Err(Error::Domain(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn hard_below_soft_and_soft_monotone(seed in any::<u64>()) {
                let mut rng = SeededRng::new(seed);
                let p = random_predictions(&mut rng, 3, 2, 20);
                let hard = p.hard_distortion();
                let mut prev = hard;
                for i in 0..40 {
                    let t = 1e-3 * 1.4f64.powi(i);
                    let soft = p.soft_distortion(t).unwrap();
                    prop_assert!(soft >= hard - 1e-12);
                    prop_assert!(soft >= prev - 1e-12);
                    prev = soft;
                }
            }
        }
    }
}
