//! From-scratch feedforward classifier.
//!
//! The default architecture stacks four ReLU hidden layers of sizes 256,
//! 128, 64 and 32 on the feature input, followed by a softmax output layer.
//! An optional detector embedding is concatenated in front of the features
//! at the input layer. Training is plain mini-batch gradient descent on
//! class-weighted cross-entropy, fully determined by the seed, with early
//! stopping on validation macro F1. A finite-difference gradient check
//! verifies the backpropagation path.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::metrics::macro_f1_indices;

/// Hidden layer sizes of the five-layer network (four weight layers plus the
/// softmax output layer).
pub const DEFAULT_HIDDEN_DIMS: [usize; 4] = [256, 128, 64, 32];

const MODEL_FORMAT_VERSION: u32 = 1;

/// Expected input composition: dual-feature length plus an optional detector
/// embedding length concatenated in front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub feature_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector_len: Option<usize>,
}

impl FeatureSpec {
    pub fn plain(feature_len: usize) -> FeatureSpec {
        FeatureSpec {
            feature_len,
            detector_len: None,
        }
    }

    pub fn with_detector(feature_len: usize, detector_len: usize) -> FeatureSpec {
        FeatureSpec {
            feature_len,
            detector_len: Some(detector_len),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.feature_len + self.detector_len.unwrap_or(0)
    }

    /// Assemble the network input `[detector | features]`.
    pub fn assemble(&self, features: &[f64], detector: Option<&[f64]>) -> Result<Vec<f64>, ClassifierError> {
        if features.len() != self.feature_len {
            return Err(ClassifierError::DimensionMismatch {
                expected: self.feature_len,
                got: features.len(),
            });
        }
        match (self.detector_len, detector) {
            (None, None) => Ok(features.to_vec()),
            (Some(d), Some(emb)) => {
                if emb.len() != d {
                    return Err(ClassifierError::DimensionMismatch {
                        expected: d,
                        got: emb.len(),
                    });
                }
                let mut input = Vec::with_capacity(d + features.len());
                input.extend_from_slice(emb);
                input.extend_from_slice(features);
                Ok(input)
            }
            (Some(d), None) => Err(ClassifierError::DimensionMismatch { expected: d, got: 0 }),
            (None, Some(emb)) => Err(ClassifierError::DimensionMismatch {
                expected: 0,
                got: emb.len(),
            }),
        }
    }
}

/// Dense layer, weights stored row-major as `out_dim x in_dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    /// input -> hidden... -> classes
    pub layer_dims: Vec<usize>,
    pub layers: Vec<Layer>,
    pub seed: u64,
    pub feature_spec: FeatureSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassWeightMode {
    None,
    InverseFrequency,
}

impl ClassWeightMode {
    pub fn parse(s: &str) -> Option<ClassWeightMode> {
        match s {
            "none" => Some(ClassWeightMode::None),
            "inverse" | "inverse_frequency" => Some(ClassWeightMode::InverseFrequency),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub class_weights: ClassWeightMode,
    /// Early-stopping patience on validation macro F1.
    pub patience: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> TrainConfig {
        TrainConfig {
            epochs: 100,
            learning_rate: 0.05,
            batch_size: 32,
            class_weights: ClassWeightMode::InverseFrequency,
            patience: 10,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub val_macro_f1: Option<f64>,
}

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("hidden_dims must not be empty")]
    EmptyHidden,
    #[error("input_dim and classes must be at least 1")]
    BadDims,
    #[error("expected vector of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("train set is empty")]
    EmptyTrainSet,
    #[error("label {label} outside {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("train config values must be positive (patience >= 1)")]
    BadTrainConfig,
    #[error("loss became NaN at epoch {epoch}")]
    NanLoss { epoch: usize },
    #[error("model format version {found}, expected {MODEL_FORMAT_VERSION}")]
    VersionMismatch { found: u32 },
    #[error("corrupt model file: {0}")]
    Corrupt(String),
    #[error("failed to access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Build a network `[input, hidden..., classes]` with uniform fan-in scaled
/// weights from the seeded generator and zero biases.
pub fn build_mlp(
    feature_spec: FeatureSpec,
    hidden_dims: &[usize],
    classes: usize,
    seed: u64,
) -> Result<MlpModel, ClassifierError> {
    if hidden_dims.is_empty() {
        return Err(ClassifierError::EmptyHidden);
    }
    let input_dim = feature_spec.input_dim();
    if input_dim == 0 || classes == 0 {
        return Err(ClassifierError::BadDims);
    }
    let mut layer_dims = Vec::with_capacity(hidden_dims.len() + 2);
    layer_dims.push(input_dim);
    layer_dims.extend_from_slice(hidden_dims);
    layer_dims.push(classes);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::with_capacity(layer_dims.len() - 1);
    for w in layer_dims.windows(2) {
        let (fan_in, fan_out) = (w[0], w[1]);
        let bound = 1.0 / (fan_in as f64).sqrt();
        let weights = (0..fan_in * fan_out)
            .map(|_| rng.gen::<f64>() * 2.0 * bound - bound)
            .collect();
        layers.push(Layer {
            weights,
            bias: vec![0.0; fan_out],
        });
    }
    Ok(MlpModel {
        layer_dims,
        layers,
        seed,
        feature_spec,
    })
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}

/// Negative log likelihood, clamped against underflow but propagating NaN.
fn nll(prob: f64, weight: f64) -> f64 {
    if prob.is_nan() {
        return f64::NAN;
    }
    -weight * prob.max(1e-300).ln()
}

impl MlpModel {
    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn classes(&self) -> usize {
        *self.layer_dims.last().expect("at least two dims")
    }

    /// Pre-activations per layer for an assembled input.
    fn forward_z(&self, input: &[f64]) -> Vec<Vec<f64>> {
        let mut zs = Vec::with_capacity(self.layers.len());
        let mut activation = input.to_vec();
        for (k, layer) in self.layers.iter().enumerate() {
            let in_dim = self.layer_dims[k];
            let out_dim = self.layer_dims[k + 1];
            let mut z = vec![0.0; out_dim];
            for (i, zi) in z.iter_mut().enumerate() {
                let mut acc = layer.bias[i];
                let row = &layer.weights[i * in_dim..(i + 1) * in_dim];
                for (w, x) in row.iter().zip(&activation) {
                    acc += w * x;
                }
                *zi = acc;
            }
            activation = if k + 1 == self.layers.len() {
                z.clone()
            } else {
                z.iter().map(|&v| v.max(0.0)).collect()
            };
            zs.push(z);
        }
        zs
    }

    /// Softmax probabilities for an already assembled input vector.
    pub fn forward_probs(&self, input: &[f64]) -> Result<Vec<f64>, ClassifierError> {
        if input.len() != self.input_dim() {
            return Err(ClassifierError::DimensionMismatch {
                expected: self.input_dim(),
                got: input.len(),
            });
        }
        let zs = self.forward_z(input);
        Ok(softmax(zs.last().expect("at least one layer")))
    }

    /// Softmax probabilities for `features` with an optional detector
    /// embedding, checked against the model's feature spec.
    pub fn predict(&self, features: &[f64], detector: Option<&[f64]>) -> Result<Vec<f64>, ClassifierError> {
        let input = self.feature_spec.assemble(features, detector)?;
        self.forward_probs(&input)
    }

    /// Cross-entropy loss of one sample (optionally class-weighted).
    fn sample_loss(&self, input: &[f64], label: usize, weight: f64) -> f64 {
        let zs = self.forward_z(input);
        let probs = softmax(zs.last().expect("layers"));
        nll(probs[label], weight)
    }

    /// Backpropagate one sample; accumulates parameter gradients scaled by
    /// `weight` into `grads` and returns the sample loss.
    fn accumulate_gradients(
        &self,
        input: &[f64],
        label: usize,
        weight: f64,
        grads: &mut [Layer],
    ) -> f64 {
        let zs = self.forward_z(input);
        let n_layers = self.layers.len();

        // activations entering each layer
        let mut activations: Vec<Vec<f64>> = Vec::with_capacity(n_layers);
        activations.push(input.to_vec());
        for k in 0..n_layers - 1 {
            activations.push(zs[k].iter().map(|&v| v.max(0.0)).collect());
        }

        let probs = softmax(&zs[n_layers - 1]);
        let loss = nll(probs[label], weight);

        // delta of the output layer: w_y * (p - onehot)
        let mut delta: Vec<f64> = probs
            .iter()
            .enumerate()
            .map(|(i, &p)| weight * (p - if i == label { 1.0 } else { 0.0 }))
            .collect();

        for k in (0..n_layers).rev() {
            let in_dim = self.layer_dims[k];
            let grad = &mut grads[k];
            let a = &activations[k];
            for (i, &d) in delta.iter().enumerate() {
                grad.bias[i] += d;
                let row = &mut grad.weights[i * in_dim..(i + 1) * in_dim];
                for (g, &x) in row.iter_mut().zip(a) {
                    *g += d * x;
                }
            }
            if k > 0 {
                let mut prev = vec![0.0; in_dim];
                let layer = &self.layers[k];
                for (i, &d) in delta.iter().enumerate() {
                    let row = &layer.weights[i * in_dim..(i + 1) * in_dim];
                    for (p, &w) in prev.iter_mut().zip(row) {
                        *p += d * w;
                    }
                }
                // relu gate on the previous layer's pre-activations
                for (p, &z) in prev.iter_mut().zip(&zs[k - 1]) {
                    if z <= 0.0 {
                        *p = 0.0;
                    }
                }
                delta = prev;
            }
        }
        loss
    }

    fn zero_gradients(&self) -> Vec<Layer> {
        self.layers
            .iter()
            .map(|l| Layer {
                weights: vec![0.0; l.weights.len()],
                bias: vec![0.0; l.bias.len()],
            })
            .collect()
    }
}

/// Inverse-frequency class weights normalized to mean 1 over the classes
/// present; `None` mode gives all ones.
fn class_weights(labels: &[usize], classes: usize, mode: ClassWeightMode) -> Vec<f64> {
    match mode {
        ClassWeightMode::None => vec![1.0; classes],
        ClassWeightMode::InverseFrequency => {
            let mut counts = vec![0usize; classes];
            for &l in labels {
                counts[l] += 1;
            }
            let raw: Vec<f64> = counts
                .iter()
                .map(|&c| if c == 0 { 0.0 } else { 1.0 / c as f64 })
                .collect();
            let present = raw.iter().filter(|&&r| r > 0.0).count();
            let sum: f64 = raw.iter().sum();
            if present == 0 || sum == 0.0 {
                return vec![1.0; classes];
            }
            raw.iter()
                .map(|&r| if r > 0.0 { r * present as f64 / sum } else { 1.0 })
                .collect()
        }
    }
}

/// Mini-batch gradient descent on class-weighted cross-entropy.
///
/// Deterministic under the config seed: one generator drives the per-epoch
/// shuffles and nothing else is stochastic. With a nonempty validation set,
/// training stops after `patience` epochs without a macro F1 improvement and
/// the best-scoring weights are restored.
pub fn train(
    mut model: MlpModel,
    train_set: &[(Vec<f64>, usize)],
    val_set: &[(Vec<f64>, usize)],
    config: &TrainConfig,
) -> Result<(MlpModel, Vec<EpochStats>), ClassifierError> {
    if train_set.is_empty() {
        return Err(ClassifierError::EmptyTrainSet);
    }
    if config.epochs == 0
        || config.learning_rate <= 0.0
        || config.batch_size == 0
        || config.patience == 0
    {
        return Err(ClassifierError::BadTrainConfig);
    }
    let classes = model.classes();
    for (input, label) in train_set.iter().chain(val_set) {
        if input.len() != model.input_dim() {
            return Err(ClassifierError::DimensionMismatch {
                expected: model.input_dim(),
                got: input.len(),
            });
        }
        if *label >= classes {
            return Err(ClassifierError::LabelOutOfRange {
                label: *label,
                classes,
            });
        }
    }

    let labels: Vec<usize> = train_set.iter().map(|(_, l)| *l).collect();
    let weights = class_weights(&labels, classes, config.class_weights);
    let batch_size = config.batch_size.max(1);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut history = Vec::with_capacity(config.epochs);
    let mut best: Option<(f64, Vec<Layer>)> = None;
    let mut strikes = 0usize;

    let val_gold: Vec<usize> = val_set.iter().map(|(_, l)| *l).collect();

    for epoch in 0..config.epochs {
        let mut order: Vec<usize> = (0..train_set.len()).collect();
        order.shuffle(&mut rng);

        let mut loss_sum = 0.0;
        for batch in order.chunks(batch_size) {
            let mut grads = model.zero_gradients();
            for &i in batch {
                let (input, label) = &train_set[i];
                loss_sum += model.accumulate_gradients(input, *label, weights[*label], &mut grads);
            }
            let step = config.learning_rate / batch.len() as f64;
            for (layer, grad) in model.layers.iter_mut().zip(&grads) {
                for (w, g) in layer.weights.iter_mut().zip(&grad.weights) {
                    *w -= step * g;
                }
                for (b, g) in layer.bias.iter_mut().zip(&grad.bias) {
                    *b -= step * g;
                }
            }
        }
        let train_loss = loss_sum / train_set.len() as f64;
        if !train_loss.is_finite() {
            return Err(ClassifierError::NanLoss { epoch });
        }

        let val_macro_f1 = if val_set.is_empty() {
            None
        } else {
            let preds: Vec<usize> = val_set
                .iter()
                .map(|(input, _)| {
                    let probs = model.forward_probs(input).expect("validated dims");
                    argmax_index(&probs)
                })
                .collect();
            Some(macro_f1_indices(&preds, &val_gold, classes))
        };

        history.push(EpochStats {
            epoch,
            train_loss,
            val_macro_f1,
        });

        if let Some(f1) = val_macro_f1 {
            let improved = best.as_ref().is_none_or(|(b, _)| f1 > *b);
            if improved {
                best = Some((f1, model.layers.clone()));
                strikes = 0;
            } else {
                strikes += 1;
                if strikes >= config.patience {
                    break;
                }
            }
        }
    }

    if let Some((_, layers)) = best {
        model.layers = layers;
    }
    Ok((model, history))
}

fn argmax_index(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Compare analytic gradients against central finite differences over every
/// parameter; returns the maximum relative error.
pub fn gradient_check(model: &MlpModel, input: &[f64], label: usize, epsilon: f64) -> f64 {
    let mut grads = model.zero_gradients();
    model.accumulate_gradients(input, label, 1.0, &mut grads);

    let mut max_rel = 0.0f64;
    let mut check = |analytic: f64, perturbed: &mut dyn FnMut(&mut MlpModel, f64)| {
        let mut plus = model.clone();
        perturbed(&mut plus, epsilon);
        let mut minus = model.clone();
        perturbed(&mut minus, -epsilon);
        let numeric = (plus.sample_loss(input, label, 1.0) - minus.sample_loss(input, label, 1.0))
            / (2.0 * epsilon);
        let rel = (analytic - numeric).abs() / (analytic.abs() + numeric.abs()).max(1e-8);
        if rel > max_rel {
            max_rel = rel;
        }
    };

    for k in 0..model.layers.len() {
        for idx in 0..model.layers[k].weights.len() {
            let analytic = grads[k].weights[idx];
            check(analytic, &mut |m, eps| m.layers[k].weights[idx] += eps);
        }
        for idx in 0..model.layers[k].bias.len() {
            let analytic = grads[k].bias[idx];
            check(analytic, &mut |m, eps| m.layers[k].bias[idx] += eps);
        }
    }
    max_rel
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    layer_dims: Vec<usize>,
    activation: String,
    seed: u64,
    feature_spec: FeatureSpec,
    layers: Vec<Layer>,
}

pub fn save_model(model: &MlpModel, path: &Path) -> Result<(), ClassifierError> {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        layer_dims: model.layer_dims.clone(),
        activation: "relu".to_string(),
        seed: model.seed,
        feature_spec: model.feature_spec,
        layers: model.layers.clone(),
    };
    let json = serde_json::to_string(&file).expect("model serializes");
    fs::write(path, json).map_err(|source| ClassifierError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<MlpModel, ClassifierError> {
    let text = fs::read_to_string(path).map_err(|source| ClassifierError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| ClassifierError::Corrupt(e.to_string()))?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(ClassifierError::VersionMismatch {
            found: file.format_version,
        });
    }
    if file.activation != "relu" {
        return Err(ClassifierError::Corrupt(format!(
            "unknown activation '{}'",
            file.activation
        )));
    }
    if file.layer_dims.len() < 2 || file.layers.len() != file.layer_dims.len() - 1 {
        return Err(ClassifierError::Corrupt("layer count mismatch".to_string()));
    }
    for (k, layer) in file.layers.iter().enumerate() {
        let (fan_in, fan_out) = (file.layer_dims[k], file.layer_dims[k + 1]);
        if layer.weights.len() != fan_in * fan_out || layer.bias.len() != fan_out {
            return Err(ClassifierError::Corrupt(format!("layer {k} shape mismatch")));
        }
    }
    if file.feature_spec.input_dim() != file.layer_dims[0] {
        return Err(ClassifierError::Corrupt(
            "feature spec does not match input layer".to_string(),
        ));
    }
    Ok(MlpModel {
        layer_dims: file.layer_dims,
        layers: file.layers,
        seed: file.seed,
        feature_spec: file.feature_spec,
    })
}
