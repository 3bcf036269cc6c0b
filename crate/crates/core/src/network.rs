//! Multi-head feed-forward regressor with a hand-written backward pass.
//!
//! A shared ReLU backbone feeds two head groups: `n` hypothesis heads of
//! dimension `d` (optionally squashed by `tanh`) and `n` sigmoid score heads.
//! All parameters live in one flat buffer, so gradients and optimizer moments
//! are plain vectors with the same layout.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Matrix, SeededRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputActivation {
    None,
    Tanh,
}

/// Weight initialisation. Biases start at zero for every scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitScheme {
    /// Backbone weights `U(±√(6/fan_in))`, head weights `U(±√(1/fan_in))`.
    HeUniform,
    /// All parameters zero.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Architecture {
    pub input_dim: usize,
    pub hidden: Vec<usize>,
    pub n_hypotheses: usize,
    pub output_dim: usize,
    pub output_activation: OutputActivation,
}

impl Architecture {
    /// Two hidden layers of 256 units with `tanh` hypothesis heads.
    pub fn synthetic(input_dim: usize, n_hypotheses: usize, output_dim: usize) -> Self {
        Self {
            input_dim,
            hidden: vec![256, 256],
            n_hypotheses,
            output_dim,
            output_activation: OutputActivation::Tanh,
        }
    }

    /// One hidden layer (50 units, 100 for the largest datasets) with linear heads.
    pub fn uci(input_dim: usize, n_hypotheses: usize, output_dim: usize, hidden: usize) -> Self {
        Self {
            input_dim,
            hidden: vec![hidden],
            n_hypotheses,
            output_dim,
            output_activation: OutputActivation::None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_hypotheses == 0 {
            return Err(Error::Validation("need at least one hypothesis".into()));
        }
        if self.input_dim == 0 || self.output_dim == 0 {
            return Err(Error::Validation("input and output dimensions must be positive".into()));
        }
        if self.hidden.contains(&0) {
            return Err(Error::Validation("hidden layers must have positive width".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dense {
    inputs: usize,
    outputs: usize,
    weights: usize,
    bias: usize,
}

impl Dense {
    fn end(&self) -> usize {
        self.bias + self.outputs
    }
}

fn layout(arch: &Architecture) -> (Vec<Dense>, usize) {
    let mut layers = Vec::with_capacity(arch.hidden.len() + 2);
    let mut offset = 0;
    let mut width = arch.input_dim;
    let mut push = |inputs: usize, outputs: usize, offset: &mut usize| {
        let d = Dense {
            inputs,
            outputs,
            weights: *offset,
            bias: *offset + inputs * outputs,
        };
        *offset = d.end();
        layers.push(d);
    };
    for &h in &arch.hidden {
        push(width, h, &mut offset);
        width = h;
    }
    push(width, arch.n_hypotheses * arch.output_dim, &mut offset);
    push(width, arch.n_hypotheses, &mut offset);
    (layers, offset)
}

/// The hypothesis and score heads over a shared backbone.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisBank {
    arch: Architecture,
    layers: Vec<Dense>,
    params: Vec<f64>,
    version: u64,
}

/// Gradient buffer congruent with a bank's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    values: Vec<f64>,
}

impl Gradients {
    pub fn zeros_like(bank: &HypothesisBank) -> Self {
        Self {
            values: vec![0.0; bank.params.len()],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn clear(&mut self) {
        self.values.iter_mut().for_each(|g| *g = 0.0);
    }

    pub fn scale(&mut self, alpha: f64) {
        self.values.iter_mut().for_each(|g| *g *= alpha);
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|g| g.is_finite())
    }
}

/// Activations cached by a forward pass.
#[derive(Debug, Clone, Default)]
pub struct Tape {
    version: u64,
    /// Input followed by each hidden layer's post-ReLU output.
    activations: Vec<Vec<f64>>,
    hypotheses: Vec<f64>,
    scores: Vec<f64>,
    output_dim: usize,
}

impl Tape {
    /// Hypotheses as an `n × d` row-major slice.
    pub fn hypotheses(&self) -> &[f64] {
        &self.hypotheses
    }

    pub fn hypothesis(&self, k: usize) -> &[f64] {
        &self.hypotheses[k * self.output_dim..(k + 1) * self.output_dim]
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn hypotheses_matrix(&self) -> Matrix {
        Matrix::from_vec(self.scores.len(), self.output_dim, self.hypotheses.clone())
            .expect("tape shapes are consistent")
    }
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl HypothesisBank {
    pub fn new(arch: Architecture, init: InitScheme, rng: &mut SeededRng) -> Result<Self> {
        arch.validate()?;
        let (layers, total) = layout(&arch);
        let mut params = vec![0.0; total];
        if init == InitScheme::HeUniform {
            let n_backbone = arch.hidden.len();
            for (i, layer) in layers.iter().enumerate() {
                let gain = if i < n_backbone { 6.0 } else { 1.0 };
                let bound = (gain / layer.inputs as f64).sqrt();
                for w in &mut params[layer.weights..layer.bias] {
                    *w = rng.uniform_range(-bound, bound);
                }
            }
        }
        Ok(Self {
            arch,
            layers,
            params,
            version: 0,
        })
    }

    pub fn architecture(&self) -> &Architecture {
        &self.arch
    }

    pub fn n_hypotheses(&self) -> usize {
        self.arch.n_hypotheses
    }

    pub fn output_dim(&self) -> usize {
        self.arch.output_dim
    }

    pub fn input_dim(&self) -> usize {
        self.arch.input_dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Mutable access to the raw parameters. Invalidates outstanding tapes.
    pub fn params_mut(&mut self) -> &mut [f64] {
        self.version += 1;
        &mut self.params
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    fn hypothesis_head(&self) -> Dense {
        self.layers[self.layers.len() - 2]
    }

    fn score_head(&self) -> Dense {
        self.layers[self.layers.len() - 1]
    }

    /// Runs the network on `x`, returning the activation cache.
    pub fn forward(&self, x: &[f64]) -> Result<Tape> {
        let mut tape = Tape::default();
        self.forward_into(x, &mut tape)?;
        Ok(tape)
    }

    /// Like [`forward`](Self::forward) but reuses the buffers of `tape`.
    pub fn forward_into(&self, x: &[f64], tape: &mut Tape) -> Result<()> {
        if x.len() != self.arch.input_dim {
            return Err(Error::Shape(format!(
                "input has dimension {}, network expects {}",
                x.len(),
                self.arch.input_dim
            )));
        }
        let n_backbone = self.arch.hidden.len();
        tape.activations.resize_with(n_backbone + 1, Vec::new);
        tape.activations[0].clear();
        tape.activations[0].extend_from_slice(x);
        for (i, layer) in self.layers[..n_backbone].iter().enumerate() {
            let (done, rest) = tape.activations.split_at_mut(i + 1);
            let input = &done[i];
            let out = &mut rest[0];
            self.affine(layer, input, out);
            for v in out.iter_mut() {
                *v = v.max(0.0);
            }
            if out.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    context: format!("hidden layer {i}"),
                });
            }
        }
        let h = &tape.activations[n_backbone];
        self.affine(&self.hypothesis_head(), h, &mut tape.hypotheses);
        if self.arch.output_activation == OutputActivation::Tanh {
            tape.hypotheses.iter_mut().for_each(|v| *v = v.tanh());
        }
        if tape.hypotheses.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "hypothesis heads".into(),
            });
        }
        self.affine(&self.score_head(), h, &mut tape.scores);
        tape.scores.iter_mut().for_each(|v| *v = sigmoid(*v));
        if tape.scores.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "score heads".into(),
            });
        }
        tape.version = self.version;
        tape.output_dim = self.arch.output_dim;
        Ok(())
    }

    fn affine(&self, layer: &Dense, input: &[f64], out: &mut Vec<f64>) {
        let w = &self.params[layer.weights..layer.bias];
        let b = &self.params[layer.bias..layer.end()];
        out.clear();
        out.extend(w.chunks_exact(layer.inputs).zip(b).map(|(row, bias)| {
            row.iter().zip(input).fold(*bias, |acc, (wi, xi)| acc + wi * xi)
        }));
    }

    /// Accumulates into `grads` the gradient of
    /// `⟨d_hypotheses, hypotheses⟩ + ⟨d_scores, scores⟩` for the pass in `tape`.
    pub fn backward_into(
        &self,
        tape: &Tape,
        d_hypotheses: &[f64],
        d_scores: &[f64],
        grads: &mut Gradients,
    ) -> Result<()> {
        if tape.version != self.version || tape.activations.is_empty() {
            return Err(Error::Contract(
                "tape was not produced by the current parameters".into(),
            ));
        }
        let n = self.arch.n_hypotheses;
        let d = self.arch.output_dim;
        if d_hypotheses.len() != n * d || d_scores.len() != n {
            return Err(Error::Shape(format!(
                "upstream gradients must be {n}x{d} and {n}, got {} and {}",
                d_hypotheses.len(),
                d_scores.len()
            )));
        }
        if grads.values.len() != self.params.len() {
            return Err(Error::Shape("gradient buffer does not match the bank".into()));
        }
        let n_backbone = self.arch.hidden.len();
        let h = &tape.activations[n_backbone];
        let mut dh = vec![0.0; h.len()];

        let tanh = self.arch.output_activation == OutputActivation::Tanh;
        let dz_hyp: Vec<f64> = d_hypotheses
            .iter()
            .zip(&tape.hypotheses)
            .map(|(g, f)| if tanh { g * (1.0 - f * f) } else { *g })
            .collect();
        self.accumulate_dense(&self.hypothesis_head(), h, &dz_hyp, &mut dh, grads);

        let dz_score: Vec<f64> = d_scores
            .iter()
            .zip(&tape.scores)
            .map(|(g, s)| g * s * (1.0 - s))
            .collect();
        self.accumulate_dense(&self.score_head(), h, &dz_score, &mut dh, grads);

        for i in (0..n_backbone).rev() {
            let out = &tape.activations[i + 1];
            let dz: Vec<f64> = dh
                .iter()
                .zip(out)
                .map(|(g, a)| if *a > 0.0 { *g } else { 0.0 })
                .collect();
            let input = &tape.activations[i];
            let mut d_input = vec![0.0; input.len()];
            self.accumulate_dense(&self.layers[i], input, &dz, &mut d_input, grads);
            dh = d_input;
        }
        Ok(())
    }

    pub fn backward(&self, tape: &Tape, d_hypotheses: &[f64], d_scores: &[f64]) -> Result<Gradients> {
        let mut grads = Gradients::zeros_like(self);
        self.backward_into(tape, d_hypotheses, d_scores, &mut grads)?;
        Ok(grads)
    }

    fn accumulate_dense(
        &self,
        layer: &Dense,
        input: &[f64],
        dz: &[f64],
        d_input: &mut [f64],
        grads: &mut Gradients,
    ) {
        let w = &self.params[layer.weights..layer.bias];
        let (gw, gb) = grads.values[layer.weights..layer.end()].split_at_mut(layer.inputs * layer.outputs);
        for (o, &g) in dz.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            gb[o] += g;
            let row = &w[o * layer.inputs..(o + 1) * layer.inputs];
            let grow = &mut gw[o * layer.inputs..(o + 1) * layer.inputs];
            for ((gwi, xi), (di, wi)) in grow.iter_mut().zip(input).zip(d_input.iter_mut().zip(row)) {
                *gwi += g * xi;
                *di += g * wi;
            }
        }
    }

    /// Writes a versioned binary checkpoint (little-endian, bit-exact).
    pub fn write_checkpoint<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Checkpoint(e.to_string());
        w.write_all(CHECKPOINT_MAGIC).map_err(io)?;
        w.write_all(&CHECKPOINT_VERSION.to_le_bytes()).map_err(io)?;
        let mut header = vec![
            self.arch.input_dim as u64,
            self.arch.hidden.len() as u64,
        ];
        header.extend(self.arch.hidden.iter().map(|&h| h as u64));
        header.push(self.arch.n_hypotheses as u64);
        header.push(self.arch.output_dim as u64);
        header.push(match self.arch.output_activation {
            OutputActivation::None => 0,
            OutputActivation::Tanh => 1,
        });
        header.push(self.params.len() as u64);
        for v in header {
            w.write_all(&v.to_le_bytes()).map_err(io)?;
        }
        for p in &self.params {
            w.write_all(&p.to_le_bytes()).map_err(io)?;
        }
        Ok(())
    }

    pub fn read_checkpoint<R: Read>(mut r: R) -> Result<Self> {
        let io = |e: std::io::Error| Error::Checkpoint(e.to_string());
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(io)?;
        if &magic != CHECKPOINT_MAGIC {
            return Err(Error::Checkpoint("bad magic".into()));
        }
        let mut word = [0u8; 4];
        r.read_exact(&mut word).map_err(io)?;
        let version = u32::from_le_bytes(word);
        if version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {version}")));
        }
        let mut next = || -> Result<u64> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b).map_err(io)?;
            Ok(u64::from_le_bytes(b))
        };
        let input_dim = next()? as usize;
        let depth = next()? as usize;
        if depth > 1024 {
            return Err(Error::Checkpoint("implausible depth".into()));
        }
        let hidden = (0..depth).map(|_| next().map(|h| h as usize)).collect::<Result<Vec<_>>>()?;
        let n_hypotheses = next()? as usize;
        let output_dim = next()? as usize;
        let output_activation = match next()? {
            0 => OutputActivation::None,
            1 => OutputActivation::Tanh,
            other => return Err(Error::Checkpoint(format!("unknown activation tag {other}"))),
        };
        let count = next()? as usize;
        let arch = Architecture {
            input_dim,
            hidden,
            n_hypotheses,
            output_dim,
            output_activation,
        };
        arch.validate()?;
        let (layers, total) = layout(&arch);
        if total != count {
            return Err(Error::Checkpoint(format!(
                "parameter count {count} does not match architecture ({total})"
            )));
        }
        let params = (0..count)
            .map(|_| next().map(f64::from_bits))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            arch,
            layers,
            params,
            version: 0,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_checkpoint(std::io::BufWriter::new(file))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_checkpoint(std::io::BufReader::new(file))
    }
}

const CHECKPOINT_MAGIC: &[u8; 8] = b"AMCLCKPT";
const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Sgd,
    Adam,
}

/// Optimizer with per-parameter Adam moments.
#[derive(Debug, Clone)]
pub struct Optimizer {
    kind: OptimizerKind,
    learning_rate: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    steps: u64,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, learning_rate: f64, bank: &HypothesisBank) -> Self {
        let moments = match kind {
            OptimizerKind::Sgd => 0,
            OptimizerKind::Adam => bank.param_count(),
        };
        Self {
            kind,
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            first_moment: vec![0.0; moments],
            second_moment: vec![0.0; moments],
            steps: 0,
        }
    }

    pub fn kind(&self) -> OptimizerKind {
        self.kind
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    /// Applies one update. A non-finite gradient leaves the bank untouched.
    pub fn step(&mut self, bank: &mut HypothesisBank, grads: &Gradients) -> Result<()> {
        if grads.values.len() != bank.params.len() {
            return Err(Error::Shape("gradient buffer does not match the bank".into()));
        }
        if !grads.is_finite() {
            return Err(Error::NonFinite {
                context: "gradient; update skipped".into(),
            });
        }
        let lr = self.learning_rate;
        let params = bank.params_mut();
        match self.kind {
            OptimizerKind::Sgd => {
                for (p, g) in params.iter_mut().zip(&grads.values) {
                    *p -= lr * g;
                }
            }
            OptimizerKind::Adam => {
                self.steps += 1;
                let t = self.steps as i32;
                let c1 = 1.0 - self.beta1.powi(t);
                let c2 = 1.0 - self.beta2.powi(t);
                for (((p, g), m), v) in params
                    .iter_mut()
                    .zip(&grads.values)
                    .zip(&mut self.first_moment)
                    .zip(&mut self.second_moment)
                {
                    *m = self.beta1 * *m + (1.0 - self.beta1) * g;
                    *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
                    let m_hat = *m / c1;
                    let v_hat = *v / c2;
                    *p -= lr * m_hat / (v_hat.sqrt() + self.epsilon);
                }
            }
        }
        Ok(())
    }
}
