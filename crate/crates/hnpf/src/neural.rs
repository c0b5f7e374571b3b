//! Stage-1 classifier: a small dense network that learns the weak-Pareto
//! discriminant labels and is then swept over a large inference sample.
//!
//! The architecture is fixed: three hidden layers of eight tanh units each
//! and a two-unit softmax head giving `(p_pareto, p_non_pareto)`. Inputs are
//! affinely mapped from the variable box onto `[-1, 1]^n` before the first
//! layer; the map is stored with the model and is not trained. Without it,
//! boxes far from unit scale (e.g. a 0..48 document grid) saturate the first
//! tanh layer at initialization and learning stalls.
//!
//! Training minimizes binary cross-entropy against the discriminant labels
//! with AdaMax, a fixed number of optimizer steps per epoch, and early
//! stopping on validation loss. The returned model is the best validation
//! snapshot, which includes the untrained starting model as a candidate.
//!
//! Random streams: the crate reserves ChaCha streams 0 and 1 for sampling
//! (see [`crate::sampler`]); weight initialization uses stream 2 and batch
//! shuffling stream 3, so one run-level seed never aliases two purposes.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write as IoWrite};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fritz_john::{label_batch, DiscriminantResult};
use crate::problems::MooProblem;

/// ChaCha stream for weight initialization.
const WEIGHT_STREAM: u64 = 2;
/// ChaCha stream for per-epoch batch shuffling.
const BATCH_STREAM: u64 = 3;

/// Width of each hidden layer.
const HIDDEN: usize = 8;
/// Output classes: (pareto, non-pareto).
const CLASSES: usize = 2;
/// Floor applied to logarithm arguments in the cross-entropy.
const LOG_FLOOR: f64 = 1e-12;

/// One dense layer, `weights` row-major with one row per output unit.
#[derive(Debug, Clone, PartialEq)]
struct Dense {
    inputs: usize,
    outputs: usize,
    weights: Vec<f64>,
    biases: Vec<f64>,
}

impl Dense {
    fn zeros(inputs: usize, outputs: usize) -> Self {
        Dense {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            biases: vec![0.0; outputs],
        }
    }
}

/// The stage-1 classifier network.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    /// Per-input shift of the fixed box-to-`[-1,1]` map (not trained).
    offset: Vec<f64>,
    /// Per-input scale of the fixed box-to-`[-1,1]` map (not trained).
    scale: Vec<f64>,
    /// `n -> 8 -> 8 -> 8 -> 2`, tanh on the first three, softmax on the last.
    layers: Vec<Dense>,
}

/// Scratch buffers for forward/backward passes, reused across samples.
struct Workspace {
    /// Post-activation values: `acts[0]` is the scaled input, `acts[4]` the
    /// softmax probabilities.
    acts: Vec<Vec<f64>>,
    /// Per-layer error signals with respect to pre-activations.
    deltas: Vec<Vec<f64>>,
}

impl Workspace {
    fn new(n_inputs: usize) -> Self {
        let sizes = [n_inputs, HIDDEN, HIDDEN, HIDDEN, CLASSES];
        Workspace {
            acts: sizes.iter().map(|&s| vec![0.0; s]).collect(),
            deltas: sizes[1..].iter().map(|&s| vec![0.0; s]).collect(),
        }
    }
}

impl MlpModel {
    /// Fresh model for a problem box: weights i.i.d. uniform on
    /// `[-0.5, 0.5)`, biases zero, deterministic per seed. Weights are drawn
    /// layer by layer in storage order (row-major, one row per output unit).
    pub fn init(bounds: &[(f64, f64)], seed: u64) -> Self {
        let n = bounds.len();
        assert!(n > 0, "model needs at least one input");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(WEIGHT_STREAM);
        let mut offset = Vec::with_capacity(n);
        let mut scale = Vec::with_capacity(n);
        for &(lo, hi) in bounds {
            offset.push(0.5 * (lo + hi));
            scale.push(2.0 / (hi - lo));
        }
        let shapes = [
            (n, HIDDEN),
            (HIDDEN, HIDDEN),
            (HIDDEN, HIDDEN),
            (HIDDEN, CLASSES),
        ];
        let layers = shapes
            .iter()
            .map(|&(inputs, outputs)| {
                let mut layer = Dense::zeros(inputs, outputs);
                for w in layer.weights.iter_mut() {
                    *w = rng.gen_range(-0.5..0.5);
                }
                layer
            })
            .collect();
        MlpModel {
            offset,
            scale,
            layers,
        }
    }

    /// Number of input variables.
    pub fn n_inputs(&self) -> usize {
        self.offset.len()
    }

    /// Per-variable box the input map was built from, reconstructed from the
    /// stored offset and scale.
    pub fn input_box(&self) -> Vec<(f64, f64)> {
        self.offset
            .iter()
            .zip(&self.scale)
            .map(|(&c, &s)| {
                let half = 1.0 / s;
                (c - half, c + half)
            })
            .collect()
    }

    /// Count of trainable parameters (weights and biases; the input map is
    /// fixed and excluded). For two inputs this is 186.
    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    /// Flat snapshot of every trainable parameter, in storage order: layers
    /// first to last, each layer's weights row-major, then its biases.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.parameter_count());
        self.write_params_to(&mut out);
        out
    }

    /// Overwrite every trainable parameter from a flat snapshot in the order
    /// [`MlpModel::parameters`] returns.
    pub fn set_parameters(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.parameter_count() {
            return Err(Error::DimensionMismatch {
                expected: self.parameter_count(),
                got: flat.len(),
            });
        }
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("parameter snapshot has a non-finite component"));
        }
        self.read_params_from(flat);
        Ok(())
    }

    /// Mean cross-entropy over a batch together with its gradient with
    /// respect to every trainable parameter (same order as
    /// [`MlpModel::parameters`]). This is the exact quantity the optimizer
    /// steps on, exposed for gradient checking and external training loops.
    pub fn loss_gradient(&self, xs: &[Vec<f64>], targets: &[[f64; 2]]) -> Result<(f64, Vec<f64>)> {
        if xs.is_empty() {
            return Err(Error::input("loss gradient needs at least one sample"));
        }
        if xs.len() != targets.len() {
            return Err(Error::input(format!(
                "{} samples but {} targets",
                xs.len(),
                targets.len()
            )));
        }
        for x in xs {
            if x.len() != self.n_inputs() {
                return Err(Error::DimensionMismatch {
                    expected: self.n_inputs(),
                    got: x.len(),
                });
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::input("classifier input has a non-finite component"));
            }
        }
        let refs: Vec<&Vec<f64>> = xs.iter().collect();
        let mut ws = Workspace::new(self.n_inputs());
        let mut grad = vec![0.0; self.parameter_count()];
        let loss = self.loss_and_grad(&refs, targets, &mut ws, &mut grad);
        Ok((loss, grad))
    }

    /// Class probabilities `(p_pareto, p_non_pareto)` at `x`.
    pub fn forward(&self, x: &[f64]) -> Result<[f64; 2]> {
        if x.len() != self.n_inputs() {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("classifier input has a non-finite component"));
        }
        let mut ws = Workspace::new(self.n_inputs());
        self.forward_into(x, &mut ws);
        Ok([ws.acts[4][0], ws.acts[4][1]])
    }

    /// Forward pass writing every activation into `ws` (no checks).
    fn forward_into(&self, x: &[f64], ws: &mut Workspace) {
        for i in 0..x.len() {
            ws.acts[0][i] = (x[i] - self.offset[i]) * self.scale[i];
        }
        for (l, layer) in self.layers.iter().enumerate() {
            let (below, above) = ws.acts.split_at_mut(l + 1);
            let input = &below[l];
            let out = &mut above[0];
            for o in 0..layer.outputs {
                let row = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                let mut z = layer.biases[o];
                for i in 0..layer.inputs {
                    z += row[i] * input[i];
                }
                out[o] = z;
            }
            if l + 1 < self.layers.len() {
                for v in out.iter_mut() {
                    *v = v.tanh();
                }
            } else {
                softmax_in_place(out);
            }
        }
    }

    /// Mean cross-entropy of the model over `(x, target)` pairs.
    fn batch_loss(&self, xs: &[Vec<f64>], targets: &[[f64; 2]], ws: &mut Workspace) -> f64 {
        debug_assert_eq!(xs.len(), targets.len());
        let mut total = 0.0;
        for (x, t) in xs.iter().zip(targets) {
            self.forward_into(x, ws);
            total += sample_cross_entropy(&[ws.acts[4][0], ws.acts[4][1]], t);
        }
        total / xs.len() as f64
    }

    /// Mean loss over a batch plus its gradient with respect to every
    /// trainable parameter, written into `grad` (flat storage order).
    fn loss_and_grad(
        &self,
        xs: &[&Vec<f64>],
        targets: &[[f64; 2]],
        ws: &mut Workspace,
        grad: &mut [f64],
    ) -> f64 {
        debug_assert_eq!(grad.len(), self.parameter_count());
        grad.fill(0.0);
        let mut total = 0.0;
        let inv = 1.0 / xs.len() as f64;
        for (x, t) in xs.iter().zip(targets) {
            self.forward_into(x, ws);
            let p = [ws.acts[4][0], ws.acts[4][1]];
            total += sample_cross_entropy(&p, t);
            // Softmax + cross-entropy collapses to probabilities minus targets.
            ws.deltas[3][0] = p[0] - t[0];
            ws.deltas[3][1] = p[1] - t[1];
            let mut cursor = self.parameter_count();
            for l in (0..self.layers.len()).rev() {
                let layer = &self.layers[l];
                cursor -= layer.weights.len() + layer.biases.len();
                let (w_grad, b_grad) = grad[cursor..cursor + layer.weights.len() + layer.outputs]
                    .split_at_mut(layer.weights.len());
                let (lower, upper) = ws.deltas.split_at_mut(l);
                let delta = &upper[0];
                let input = &ws.acts[l];
                for o in 0..layer.outputs {
                    b_grad[o] += delta[o];
                    let row = &mut w_grad[o * layer.inputs..(o + 1) * layer.inputs];
                    for i in 0..layer.inputs {
                        row[i] += delta[o] * input[i];
                    }
                }
                if l > 0 {
                    let prev = &mut lower[l - 1];
                    for i in 0..layer.inputs {
                        let mut s = 0.0;
                        for o in 0..layer.outputs {
                            s += layer.weights[o * layer.inputs + i] * delta[o];
                        }
                        prev[i] = s * (1.0 - input[i] * input[i]);
                    }
                }
            }
        }
        for g in grad.iter_mut() {
            *g *= inv;
        }
        total * inv
    }

    /// Copy all trainable parameters into a flat vector (storage order:
    /// layers first-to-last, weights row-major then biases).
    fn write_params_to(&self, out: &mut Vec<f64>) {
        out.clear();
        for layer in &self.layers {
            out.extend_from_slice(&layer.weights);
            out.extend_from_slice(&layer.biases);
        }
    }

    /// Overwrite all trainable parameters from a flat vector.
    fn read_params_from(&mut self, flat: &[f64]) {
        debug_assert_eq!(flat.len(), self.parameter_count());
        let mut cursor = 0;
        for layer in self.layers.iter_mut() {
            let nw = layer.weights.len();
            layer.weights.copy_from_slice(&flat[cursor..cursor + nw]);
            cursor += nw;
            let nb = layer.biases.len();
            layer.biases.copy_from_slice(&flat[cursor..cursor + nb]);
            cursor += nb;
        }
    }

    /// Save in the versioned text format: a `hnpf-mlp 1` header, the input
    /// count, the fixed input map, then one block per layer (`layer <out>
    /// <in>`, `<out>` weight rows, one bias line). Floats use shortest
    /// round-trip formatting so `load` restores parameters bitwise.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "hnpf-mlp 1")?;
        writeln!(w, "inputs {}", self.n_inputs())?;
        writeln!(w, "offset {}", join_floats(&self.offset))?;
        writeln!(w, "scale {}", join_floats(&self.scale))?;
        for layer in &self.layers {
            writeln!(w, "layer {} {}", layer.outputs, layer.inputs)?;
            for o in 0..layer.outputs {
                let row = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                writeln!(w, "{}", join_floats(row))?;
            }
            writeln!(w, "bias {}", join_floats(&layer.biases))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Load a model written by [`MlpModel::save`]; structural problems are
    /// reported with their 1-based line number.
    pub fn load(path: &Path) -> Result<Self> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = Lines::new(reader.lines());

        let header = lines.next_line()?;
        if header.trim() != "hnpf-mlp 1" {
            return lines.fail("expected header `hnpf-mlp 1`");
        }
        let inputs_line = lines.next_line()?;
        let n: usize = match inputs_line.strip_prefix("inputs ") {
            Some(rest) => match rest.trim().parse() {
                Ok(v) if v >= 1 => v,
                _ => return lines.fail("invalid input count"),
            },
            None => return lines.fail("expected `inputs <n>`"),
        };
        let offset = lines.prefixed_floats("offset", n)?;
        let scale = lines.prefixed_floats("scale", n)?;

        let expected_shapes = [
            (n, HIDDEN),
            (HIDDEN, HIDDEN),
            (HIDDEN, HIDDEN),
            (HIDDEN, CLASSES),
        ];
        let mut layers = Vec::with_capacity(expected_shapes.len());
        for &(inputs, outputs) in &expected_shapes {
            let decl = lines.next_line()?;
            let mut parts = decl.split_whitespace();
            let ok = parts.next() == Some("layer")
                && parts.next().and_then(|s| s.parse::<usize>().ok()) == Some(outputs)
                && parts.next().and_then(|s| s.parse::<usize>().ok()) == Some(inputs)
                && parts.next().is_none();
            if !ok {
                return lines.fail(&format!("expected `layer {outputs} {inputs}`"));
            }
            let mut layer = Dense::zeros(inputs, outputs);
            for o in 0..outputs {
                let row = lines.bare_floats(inputs)?;
                layer.weights[o * inputs..(o + 1) * inputs].copy_from_slice(&row);
            }
            layer.biases = lines.prefixed_floats("bias", outputs)?;
            layers.push(layer);
        }
        if lines.next_nonempty().is_some() {
            return lines.fail("unexpected trailing content");
        }
        Ok(MlpModel {
            offset,
            scale,
            layers,
        })
    }
}

/// Line reader that tracks 1-based positions for parse diagnostics.
struct Lines<I: Iterator<Item = std::io::Result<String>>> {
    inner: I,
    line: usize,
}

impl<I: Iterator<Item = std::io::Result<String>>> Lines<I> {
    fn new(inner: I) -> Self {
        Lines { inner, line: 0 }
    }

    fn fail<T>(&self, message: &str) -> Result<T> {
        Err(Error::Parse {
            line: self.line.max(1),
            message: message.into(),
        })
    }

    fn next_nonempty(&mut self) -> Option<std::io::Result<String>> {
        loop {
            self.line += 1;
            match self.inner.next() {
                Some(Ok(l)) if l.trim().is_empty() => continue,
                other => return other,
            }
        }
    }

    fn next_line(&mut self) -> Result<String> {
        match self.next_nonempty() {
            Some(Ok(l)) => Ok(l),
            Some(Err(e)) => Err(e.into()),
            None => self.fail("file ended early"),
        }
    }

    fn parse_floats(&self, text: &str, count: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(count);
        for token in text.split_whitespace() {
            let v: f64 = match token.parse() {
                Ok(v) => v,
                Err(_) => return self.fail(&format!("`{token}` is not a number")),
            };
            out.push(v);
        }
        if out.len() != count {
            return self.fail(&format!("expected {count} numbers, found {}", out.len()));
        }
        Ok(out)
    }

    fn bare_floats(&mut self, count: usize) -> Result<Vec<f64>> {
        let line = self.next_line()?;
        self.parse_floats(&line, count)
    }

    fn prefixed_floats(&mut self, prefix: &str, count: usize) -> Result<Vec<f64>> {
        let line = self.next_line()?;
        match line.strip_prefix(prefix) {
            Some(rest) => self.parse_floats(rest, count),
            None => self.fail(&format!("expected `{prefix} ...`")),
        }
    }
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Numerically stable in-place softmax.
fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in z.iter_mut() {
        *v /= sum;
    }
}

fn sample_cross_entropy(p: &[f64; 2], t: &[f64; 2]) -> f64 {
    -(t[0] * p[0].max(LOG_FLOOR).ln() + t[1] * p[1].max(LOG_FLOOR).ln())
}

/// Mean binary cross-entropy `-[t ln p_pareto + (1-t) ln p_non_pareto]`
/// over a batch, with logarithm arguments floored at `1e-12`.
pub fn bce_loss(predictions: &[[f64; 2]], targets: &[[f64; 2]]) -> f64 {
    assert_eq!(
        predictions.len(),
        targets.len(),
        "prediction/target length mismatch"
    );
    let total: f64 = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| sample_cross_entropy(p, t))
        .sum();
    total / predictions.len() as f64
}

/// How discriminant values become training targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LabelMode {
    /// Targets `(1 - D, D)` from the normalized discriminant directly.
    #[default]
    Soft,
    /// Targets `(1, 0)` where the normalized discriminant is at most the
    /// margin, `(0, 1)` elsewhere.
    Hard,
}

/// Convert batch discriminant labels into `(t_pareto, t_non_pareto)` targets.
pub fn targets_from_labels(
    labels: &[DiscriminantResult],
    mode: LabelMode,
    epsilon_margin: f64,
) -> Vec<[f64; 2]> {
    labels
        .iter()
        .map(|l| match mode {
            LabelMode::Soft => [l.label_pareto, l.label_non_pareto],
            LabelMode::Hard => {
                if l.normalized <= epsilon_margin {
                    [1.0, 0.0]
                } else {
                    [0.0, 1.0]
                }
            }
        })
        .collect()
}

/// Everything that controls a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    /// AdaMax step size.
    pub learning_rate: f64,
    /// AdaMax first-moment decay.
    pub beta1: f64,
    /// AdaMax infinity-norm decay.
    pub beta2: f64,
    /// Numerical-stability constant in the AdaMax update.
    pub epsilon: f64,
    /// Optimizer steps per epoch.
    pub steps_per_epoch: usize,
    /// Hard cap on epochs.
    pub max_epochs: usize,
    /// Samples per optimizer step.
    pub batch_size: usize,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
    /// Discriminant margin for hard labels and certification.
    pub epsilon_margin: f64,
    /// Probability cutoff for calling a point weak-Pareto.
    pub threshold: f64,
    /// Seed for weight initialization and batch shuffling.
    pub seed: u64,
    /// Target construction mode.
    pub label_mode: LabelMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            steps_per_epoch: 1000,
            max_epochs: 50,
            batch_size: 64,
            patience: 10,
            epsilon_margin: 0.001,
            threshold: 0.5,
            seed: 7,
            label_mode: LabelMode::Soft,
        }
    }
}

impl TrainConfig {
    /// Reject configurations the trainer cannot honor.
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(
                "learning_rate must be positive and finite".into(),
            ));
        }
        for (name, beta) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&beta) {
                return Err(Error::Config(format!("{name} must lie in [0, 1)")));
            }
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        if self.steps_per_epoch == 0 || self.max_epochs == 0 || self.batch_size == 0 {
            return Err(Error::Config(
                "steps_per_epoch, max_epochs, and batch_size must all be at least 1".into(),
            ));
        }
        if self.patience == 0 {
            return Err(Error::Config("patience must be at least 1".into()));
        }
        if !(self.epsilon_margin > 0.0 && self.epsilon_margin < 1.0) {
            return Err(Error::Config(
                "epsilon_margin must lie strictly inside (0, 1)".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::Config("threshold must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Loss history of a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Mean training loss per epoch (one entry per epoch run).
    pub train_loss: Vec<f64>,
    /// Validation loss after each epoch (one entry per epoch run).
    pub val_loss: Vec<f64>,
    /// Validation loss of the untrained model (the epoch-0 candidate).
    pub initial_val_loss: f64,
    /// Epoch whose snapshot was returned; 0 means the untrained model.
    pub best_epoch: usize,
    /// Number of epochs actually run.
    pub epochs_run: usize,
}

impl TrainReport {
    /// Validation loss of the returned snapshot.
    pub fn best_val_loss(&self) -> f64 {
        if self.best_epoch == 0 {
            self.initial_val_loss
        } else {
            self.val_loss[self.best_epoch - 1]
        }
    }

    /// Write the loss history as `epoch,train_loss,val_loss` rows.
    pub fn write_loss_csv(&self, path: &Path) -> Result<()> {
        let header = vec![
            "epoch".to_string(),
            "train_loss".to_string(),
            "val_loss".to_string(),
        ];
        let rows = self
            .train_loss
            .iter()
            .zip(&self.val_loss)
            .enumerate()
            .map(|(i, (tr, va))| {
                vec![
                    (i + 1).to_string(),
                    crate::csvio::format_sig(*tr),
                    crate::csvio::format_sig(*va),
                ]
            })
            .collect::<Vec<_>>();
        crate::csvio::write_csv_file(path, &header, &rows)
    }
}

/// Train `model` on discriminant labels computed from the given coordinate
/// sets. The training and validation points are labeled together as one
/// normalization batch, so both splits share the same discriminant scale.
/// Returns the best-validation snapshot (possibly the untrained model) and
/// the loss history.
pub fn train(
    mut model: MlpModel,
    train_points: &[Vec<f64>],
    val_points: &[Vec<f64>],
    problem: &MooProblem,
    config: &TrainConfig,
) -> Result<(MlpModel, TrainReport)> {
    config.validate()?;
    if train_points.is_empty() || val_points.is_empty() {
        return Err(Error::input(
            "training and validation sets must both be non-empty",
        ));
    }
    if model.n_inputs() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: model.n_inputs(),
        });
    }

    // One labeling batch across both splits: normalization is shared.
    let mut all: Vec<Vec<f64>> = Vec::with_capacity(train_points.len() + val_points.len());
    all.extend_from_slice(train_points);
    all.extend_from_slice(val_points);
    let labels = label_batch(problem, &all)?;
    let targets = targets_from_labels(&labels, config.label_mode, config.epsilon_margin);
    let (train_targets, val_targets) = targets.split_at(train_points.len());

    let mut ws = Workspace::new(model.n_inputs());
    let n_params = model.parameter_count();
    let mut params = Vec::with_capacity(n_params);
    model.write_params_to(&mut params);
    let mut grad = vec![0.0; n_params];
    let mut moment = vec![0.0; n_params];
    let mut inf_norm = vec![0.0; n_params];
    let mut step_count = 0u32;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(BATCH_STREAM);
    let mut order: Vec<usize> = (0..train_points.len()).collect();

    let initial_val_loss = model.batch_loss(val_points, val_targets, &mut ws);
    if !initial_val_loss.is_finite() {
        return Err(Error::Training {
            epoch: 0,
            message: "validation loss of the initial model is not finite".into(),
        });
    }
    let mut best = model.clone();
    let mut best_val = initial_val_loss;
    let mut best_epoch = 0usize;
    let mut since_improvement = 0usize;

    let mut train_curve = Vec::new();
    let mut val_curve = Vec::new();
    let mut batch_xs: Vec<&Vec<f64>> = Vec::with_capacity(config.batch_size);
    let mut batch_ts: Vec<[f64; 2]> = Vec::with_capacity(config.batch_size);

    let mut epochs_run = 0usize;
    for epoch in 1..=config.max_epochs {
        epochs_run = epoch;
        // Fresh pass order each epoch; batches cycle through it modulo the
        // set size, so every step sees `batch_size` points.
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut cursor = 0usize;
        let mut epoch_loss = 0.0;
        for _ in 0..config.steps_per_epoch {
            batch_xs.clear();
            batch_ts.clear();
            for j in 0..config.batch_size {
                let idx = order[(cursor + j) % order.len()];
                batch_xs.push(&train_points[idx]);
                batch_ts.push(train_targets[idx]);
            }
            cursor = (cursor + config.batch_size) % order.len();

            let loss = model.loss_and_grad(&batch_xs, &batch_ts, &mut ws, &mut grad);
            if !loss.is_finite() {
                return Err(Error::Training {
                    epoch,
                    message: "training batch loss became non-finite".into(),
                });
            }
            epoch_loss += loss;

            step_count += 1;
            let lr_t = config.learning_rate / (1.0 - config.beta1.powi(step_count as i32));
            for i in 0..n_params {
                moment[i] = config.beta1 * moment[i] + (1.0 - config.beta1) * grad[i];
                inf_norm[i] = (config.beta2 * inf_norm[i]).max(grad[i].abs());
                params[i] -= lr_t * moment[i] / (inf_norm[i] + config.epsilon);
            }
            model.read_params_from(&params);
        }
        train_curve.push(epoch_loss / config.steps_per_epoch as f64);

        let val_loss = model.batch_loss(val_points, val_targets, &mut ws);
        if !val_loss.is_finite() {
            return Err(Error::Training {
                epoch,
                message: "validation loss became non-finite".into(),
            });
        }
        val_curve.push(val_loss);

        if val_loss < best_val {
            best_val = val_loss;
            best = model.clone();
            best_epoch = epoch;
            since_improvement = 0;
        } else {
            since_improvement += 1;
            if since_improvement >= config.patience {
                break;
            }
        }
    }

    let report = TrainReport {
        train_loss: train_curve,
        val_loss: val_curve,
        initial_val_loss,
        best_epoch,
        epochs_run,
    };
    Ok((best, report))
}

/// One inference point the classifier kept as a weak-Pareto candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakPoint {
    /// Position in the inference sample this point came from.
    pub index: usize,
    /// Coordinates in variable space.
    pub x: Vec<f64>,
    /// Objective values in canonical (minimization) form.
    pub fx: Vec<f64>,
    /// Classifier confidence that the point is weak-Pareto.
    pub p_pareto: f64,
}

/// The classifier-selected subset of an inference sample.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakParetoSet {
    /// Kept points, in inference-sample order.
    pub points: Vec<WeakPoint>,
    /// Cutoff that was applied.
    pub threshold: f64,
    /// Size of the scanned inference sample.
    pub n_candidates: usize,
}

/// Classify every inference point and keep those with `p_pareto` at or above
/// the threshold, evaluating objectives only for the kept points. An empty
/// result is valid (the caller decides whether to warn).
pub fn extract_weak_front(
    model: &MlpModel,
    points: &[Vec<f64>],
    problem: &MooProblem,
    threshold: f64,
) -> Result<WeakParetoSet> {
    if model.n_inputs() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: model.n_inputs(),
        });
    }
    let mut kept = Vec::new();
    for (index, x) in points.iter().enumerate() {
        let p = model.forward(x)?;
        if p[0] >= threshold {
            let point = problem.evaluate(x)?;
            kept.push(WeakPoint {
                index,
                x: point.x,
                fx: point.fx,
                p_pareto: p[0],
            });
        }
    }
    Ok(WeakParetoSet {
        points: kept,
        threshold,
        n_candidates: points.len(),
    })
}
