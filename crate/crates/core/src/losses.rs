//! Training objectives and their upstream gradients.
//!
//! Every loss here works on one `(x, y)` sample: `hypotheses` is the `n × d`
//! row-major output of the hypothesis heads, `y` the `d`-dimensional target and
//! `scores` the `n` score-head outputs. The returned [`LossBreakdown`] carries
//! gradients with respect to hypotheses and scores, ready for
//! [`HypothesisBank::backward_into`](crate::network::HypothesisBank::backward_into).

use crate::error::{Error, Result};
use crate::numerics::squared_distance;

/// Soft assignment `q_k ∝ exp(-ℓ_k / T)` of one sample over the hypotheses.
///
/// The partition function is kept in shifted form: with `shift = min_k ℓ_k`,
/// `log Z = -shift / T + log_z_shifted`, so `-T log Z = shift - T·log_z_shifted`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoltzmannAssignment {
    pub q: Vec<f64>,
    pub log_q: Vec<f64>,
    pub shift: f64,
    pub log_z_shifted: f64,
    pub temperature: f64,
}

impl BoltzmannAssignment {
    /// `-T log Z` for this sample.
    pub fn free_energy(&self) -> f64 {
        self.shift - self.temperature * self.log_z_shifted
    }

    /// Shannon entropy of `q` in nats.
    pub fn entropy(&self) -> f64 {
        -self
            .q
            .iter()
            .zip(&self.log_q)
            .filter(|(q, _)| **q > 0.0)
            .map(|(q, lq)| q * lq)
            .sum::<f64>()
    }

    pub fn expected_loss(&self, losses: &[f64]) -> f64 {
        self.q.iter().zip(losses).map(|(q, l)| q * l).sum()
    }
}

/// Index of the smallest loss; ties go to the lowest index.
pub fn argmin(losses: &[f64]) -> usize {
    let mut best = 0;
    for (k, l) in losses.iter().enumerate().skip(1) {
        if *l < losses[best] {
            best = k;
        }
    }
    best
}

pub fn softmin(losses: &[f64], temperature: f64) -> Result<BoltzmannAssignment> {
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "softmin needs a positive temperature, got {temperature}; use the hard assignment at T = 0"
        )));
    }
    if losses.is_empty() {
        return Err(Error::Degenerate("softmin over zero hypotheses".into()));
    }
    if losses.iter().any(|l| !l.is_finite()) {
        return Err(Error::NonFinite {
            context: "softmin losses".into(),
        });
    }
    let shift = losses[argmin(losses)];
    let exponents: Vec<f64> = losses.iter().map(|l| -(l - shift) / temperature).collect();
    let log_z_shifted = exponents.iter().map(|a| a.exp()).sum::<f64>().ln();
    let log_q: Vec<f64> = exponents.iter().map(|a| a - log_z_shifted).collect();
    let q = log_q.iter().map(|lq| lq.exp()).collect();
    Ok(BoltzmannAssignment {
        q,
        log_q,
        shift,
        log_z_shifted,
        temperature,
    })
}

/// Per-sample breakdown of the compound objective `wta + scoring`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossBreakdown {
    pub wta: f64,
    pub scoring: f64,
    /// Gradient of `wta` with respect to the `n × d` hypotheses.
    pub d_hypotheses: Vec<f64>,
    /// Gradient of `scoring` with respect to the scores.
    pub d_scores: Vec<f64>,
    /// Zero-based index of the closest hypothesis.
    pub winner: usize,
    /// Assignment weights used for the `wta` term (held constant when differentiating).
    pub weights: Vec<f64>,
}

impl LossBreakdown {
    pub fn total(&self) -> f64 {
        self.wta + self.scoring
    }
}

/// Squared distances `‖f_k - y‖²` for every hypothesis.
pub fn hypothesis_losses(hypotheses: &[f64], y: &[f64]) -> Vec<f64> {
    hypotheses
        .chunks_exact(y.len())
        .map(|f| squared_distance(f, y))
        .collect()
}

fn check_shapes(hypotheses: &[f64], y: &[f64], scores: &[f64]) -> Result<usize> {
    let n = scores.len();
    if n == 0 {
        return Err(Error::Degenerate("need at least one hypothesis".into()));
    }
    if y.is_empty() || hypotheses.len() != n * y.len() {
        return Err(Error::Shape(format!(
            "{} hypothesis values do not form {n} hypotheses of dimension {}",
            hypotheses.len(),
            y.len()
        )));
    }
    Ok(n)
}

const PROB_FLOOR: f64 = 1e-12;

/// Binary cross-entropy `-Σ_k [t_k ln γ_k + (1 - t_k) ln(1 - γ_k)]` with the
/// one-hot target `t = 1[k = winner]`, and its gradient with respect to `γ`.
pub fn scoring_loss(scores: &[f64], winner: usize) -> (f64, Vec<f64>) {
    let mut value = 0.0;
    let grads = scores
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            let g = g.clamp(PROB_FLOOR, 1.0 - PROB_FLOOR);
            if k == winner {
                value -= g.ln();
                -1.0 / g
            } else {
                value -= (1.0 - g).ln();
                1.0 / (1.0 - g)
            }
        })
        .collect();
    (value, grads)
}

/// `Σ_k w_k ‖f_k - y‖²` with `w` frozen, and its gradient `2 w_k (f_k - y)`.
pub fn weighted_distortion(hypotheses: &[f64], y: &[f64], weights: &[f64]) -> (f64, Vec<f64>) {
    let d = y.len();
    let mut value = 0.0;
    let mut grads = vec![0.0; hypotheses.len()];
    for (k, (f, w)) in hypotheses.chunks_exact(d).zip(weights).enumerate() {
        if *w == 0.0 {
            continue;
        }
        value += w * squared_distance(f, y);
        for ((g, fi), yi) in grads[k * d..(k + 1) * d].iter_mut().zip(f).zip(y) {
            *g = 2.0 * w * (fi - yi);
        }
    }
    (value, grads)
}

fn assemble(hypotheses: &[f64], y: &[f64], scores: &[f64], winner: usize, weights: Vec<f64>) -> LossBreakdown {
    let (wta, d_hypotheses) = weighted_distortion(hypotheses, y, &weights);
    let (scoring, d_scores) = scoring_loss(scores, winner);
    LossBreakdown {
        wta,
        scoring,
        d_hypotheses,
        d_scores,
        winner,
        weights,
    }
}

/// Winner-takes-all: only the closest hypothesis receives gradient.
pub fn wta_loss(hypotheses: &[f64], y: &[f64], scores: &[f64]) -> Result<LossBreakdown> {
    let n = check_shapes(hypotheses, y, scores)?;
    let losses = hypothesis_losses(hypotheses, y);
    let winner = argmin(&losses);
    let mut weights = vec![0.0; n];
    weights[winner] = 1.0;
    Ok(assemble(hypotheses, y, scores, winner, weights))
}

/// Annealed WTA: Boltzmann weights at temperature `T`, treated as constants.
///
/// The scoring term keeps the hard winner indicator.
pub fn awta_loss(hypotheses: &[f64], y: &[f64], scores: &[f64], temperature: f64) -> Result<LossBreakdown> {
    check_shapes(hypotheses, y, scores)?;
    let losses = hypothesis_losses(hypotheses, y);
    let assignment = softmin(&losses, temperature)?;
    let winner = argmin(&losses);
    Ok(assemble(hypotheses, y, scores, winner, assignment.q))
}

/// Relaxed WTA: weight `1 - ε` on the winner and `ε / (n - 1)` on every other hypothesis.
pub fn relaxed_wta_loss(hypotheses: &[f64], y: &[f64], scores: &[f64], epsilon: f64) -> Result<LossBreakdown> {
    let n = check_shapes(hypotheses, y, scores)?;
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    if epsilon == 0.0 {
        return wta_loss(hypotheses, y, scores);
    }
    if n == 1 {
        return Err(Error::Degenerate(
            "relaxed WTA with a single hypothesis has nowhere to put epsilon".into(),
        ));
    }
    let losses = hypothesis_losses(hypotheses, y);
    let winner = argmin(&losses);
    let mut weights = vec![epsilon / (n - 1) as f64; n];
    weights[winner] = 1.0 - epsilon;
    Ok(assemble(hypotheses, y, scores, winner, weights))
}

/// First-order term `(2/n)(f_k - y)` of the soft-distortion gradient as `T → ∞`.
pub fn high_temperature_gradient_limit(hypotheses: &[f64], y: &[f64], temperature: f64) -> Result<Vec<f64>> {
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {temperature}")));
    }
    if y.is_empty() || !hypotheses.len().is_multiple_of(y.len()) {
        return Err(Error::Shape("hypotheses do not match target dimension".into()));
    }
    let n = hypotheses.len() / y.len();
    let scale = 2.0 / n as f64;
    Ok(hypotheses
        .chunks_exact(y.len())
        .flat_map(|f| f.iter().zip(y).map(move |(fi, yi)| scale * (fi - yi)))
        .collect())
}

/// How a sample's distortion is spread across hypotheses during training.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AssignmentRule {
    Hard,
    Boltzmann { temperature: f64 },
    Relaxed { epsilon: f64 },
}

impl AssignmentRule {
    pub fn loss(&self, hypotheses: &[f64], y: &[f64], scores: &[f64]) -> Result<LossBreakdown> {
        match *self {
            AssignmentRule::Hard => wta_loss(hypotheses, y, scores),
            AssignmentRule::Boltzmann { temperature } => awta_loss(hypotheses, y, scores, temperature),
            AssignmentRule::Relaxed { epsilon } => relaxed_wta_loss(hypotheses, y, scores, epsilon),
        }
    }
}
