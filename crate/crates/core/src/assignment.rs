//! Euclidean set matching between `n` predictions and `m` targets.
//!
//! Permutation-invariant matching (PIT) needs a bijection and costs `O(m³)`
//! with the Hungarian method; the winner-takes-all variants only take a
//! per-target minimum or Boltzmann average, which is `O(mn)`.

use crate::error::{Error, Result};
use crate::losses::softmin;
use crate::numerics::{squared_distance, Matrix, SeededRng};

/// Largest `m` for which `PitMode::Auto` enumerates permutations.
pub const EXHAUSTIVE_AUTO_LIMIT: usize = 6;
/// Hard cap for explicit exhaustive matching.
pub const EXHAUSTIVE_MAX: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct MatchInstance {
    predictions: Matrix,
    targets: Matrix,
}

impl MatchInstance {
    pub fn new(predictions: Matrix, targets: Matrix) -> Result<Self> {
        if predictions.rows() == 0 || targets.rows() == 0 {
            return Err(Error::Degenerate("need at least one prediction and one target".into()));
        }
        if predictions.cols() != targets.cols() {
            return Err(Error::Shape(format!(
                "predictions have dimension {}, targets {}",
                predictions.cols(),
                targets.cols()
            )));
        }
        Ok(Self { predictions, targets })
    }

    /// Standard-normal predictions and targets.
    pub fn random(n: usize, m: usize, dim: usize, rng: &mut SeededRng) -> Result<Self> {
        let p = (0..n * dim).map(|_| rng.normal()).collect();
        let t = (0..m * dim).map(|_| rng.normal()).collect();
        Self::new(Matrix::from_vec(n, dim, p)?, Matrix::from_vec(m, dim, t)?)
    }

    pub fn n(&self) -> usize {
        self.predictions.rows()
    }

    pub fn m(&self) -> usize {
        self.targets.rows()
    }

    pub fn predictions(&self) -> &Matrix {
        &self.predictions
    }

    pub fn targets(&self) -> &Matrix {
        &self.targets
    }

    /// `‖ŷ_k - y_s‖²`.
    pub fn cost(&self, k: usize, s: usize) -> f64 {
        squared_distance(self.predictions.row(k), self.targets.row(s))
    }

    fn target_costs(&self, s: usize) -> Vec<f64> {
        (0..self.n()).map(|k| self.cost(k, s)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PitMode {
    /// Exhaustive up to `EXHAUSTIVE_AUTO_LIMIT`, Hungarian beyond.
    Auto,
    Exhaustive,
    Hungarian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PitResult {
    pub value: f64,
    /// `permutation[s]` is the prediction matched to target `s`.
    pub permutation: Vec<usize>,
}

pub fn pit_loss(instance: &MatchInstance) -> Result<PitResult> {
    pit_loss_with(instance, PitMode::Auto)
}

pub fn pit_loss_with(instance: &MatchInstance, mode: PitMode) -> Result<PitResult> {
    let m = instance.m();
    if instance.n() != m {
        return Err(Error::Shape(format!(
            "PIT needs as many predictions as targets, got n = {} and m = {m}",
            instance.n()
        )));
    }
    let exhaustive = match mode {
        PitMode::Auto => m <= EXHAUSTIVE_AUTO_LIMIT,
        PitMode::Exhaustive => {
            if m > EXHAUSTIVE_MAX {
                return Err(Error::Validation(format!(
                    "exhaustive PIT is capped at m = {EXHAUSTIVE_MAX}, got {m}"
                )));
            }
            true
        }
        PitMode::Hungarian => false,
    };
    let (total, permutation) = if exhaustive {
        exhaustive_match(instance)
    } else {
        hungarian(instance)
    };
    Ok(PitResult {
        value: total / m as f64,
        permutation,
    })
}

fn exhaustive_match(instance: &MatchInstance) -> (f64, Vec<usize>) {
    let m = instance.m();
    let mut perm: Vec<usize> = (0..m).collect();
    let cost = |p: &[usize]| p.iter().enumerate().map(|(s, &k)| instance.cost(k, s)).sum::<f64>();
    let mut best = (cost(&perm), perm.clone());
    // Heap's algorithm, iterative form
    let mut c = vec![0usize; m];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let v = cost(&perm);
            if v < best.0 {
                best = (v, perm.clone());
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Shortest augmenting path Hungarian method with potentials, `O(m³)`.
fn hungarian(instance: &MatchInstance) -> (f64, Vec<usize>) {
    let m = instance.m();
    // rows are targets (1-based), columns predictions (1-based); index 0 is the virtual start
    let mut u = vec![0.0; m + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for row in 1..=m {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for col in 1..=m {
                if used[col] {
                    continue;
                }
                let cur = instance.cost(col - 1, r0 - 1) - u[r0] - v[col];
                if cur < minv[col] {
                    minv[col] = cur;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=m {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut permutation = vec![0; m];
    for col in 1..=m {
        permutation[owner[col] - 1] = col - 1;
    }
    let total = permutation.iter().enumerate().map(|(s, &k)| instance.cost(k, s)).sum();
    (total, permutation)
}

/// `(1/m) Σ_s min_k ‖ŷ_k - y_s‖²`.
pub fn mcl_match_loss(instance: &MatchInstance) -> f64 {
    let total: f64 = (0..instance.m())
        .map(|s| (0..instance.n()).map(|k| instance.cost(k, s)).fold(f64::INFINITY, f64::min))
        .sum();
    total / instance.m() as f64
}

/// `(1/m) Σ_s Σ_k q_T(ŷ_k | y_s) ‖ŷ_k - y_s‖²` with one Boltzmann vector per target.
pub fn awta_match_loss(instance: &MatchInstance, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!("temperature must be positive, got {temperature}")));
    }
    let mut total = 0.0;
    for s in 0..instance.m() {
        let costs = instance.target_costs(s);
        total += softmin(&costs, temperature)?.expected_loss(&costs);
    }
    Ok(total / instance.m() as f64)
}

/// Relaxed matching: `1 - ε` on each target's closest prediction, `ε / (n - 1)` on the rest.
pub fn relaxed_match_loss(instance: &MatchInstance, epsilon: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    let n = instance.n();
    if epsilon == 0.0 {
        return Ok(mcl_match_loss(instance));
    }
    if n == 1 {
        return Err(Error::Degenerate("relaxed matching needs at least two predictions".into()));
    }
    let mut total = 0.0;
    for s in 0..instance.m() {
        let costs = instance.target_costs(s);
        let best = costs.iter().copied().fold(f64::INFINITY, f64::min);
        let sum: f64 = costs.iter().sum();
        total += (1.0 - epsilon) * best + epsilon / (n - 1) as f64 * (sum - best);
    }
    Ok(total / instance.m() as f64)
}

/// Mean cost over all `(k, s)` pairs.
pub fn uniform_match_loss(instance: &MatchInstance) -> f64 {
    let mut total = 0.0;
    for s in 0..instance.m() {
        total += instance.target_costs(s).iter().sum::<f64>();
    }
    total / (instance.m() * instance.n()) as f64
}
