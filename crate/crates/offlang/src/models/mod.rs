//! The three base classifiers: a linear model trained by SGD on hinge
//! loss, a linear SVM trained by dual coordinate descent, and a
//! one-hidden-layer MLP with logistic activations.
//!
//! All trainers are deterministic: identical data, config and seed produce
//! bitwise-identical parameters. Trained models are immutable and their
//! predictions are pure.

mod linear;
mod mlp;
mod svm;

pub use linear::{train_linear_sgd, LinearModel};
pub use mlp::{train_mlp, MlpGradients, MlpModel, DEFAULT_HIDDEN_SIZE, MLP_BATCH_SIZE};
pub use svm::train_svm_linear;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::vectorizer::SparseVector;

/// Hyperparameters shared by the SGD-style trainers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgdConfig {
    pub epochs: usize,
    /// Initial learning rate η₀.
    pub learning_rate: f64,
    /// L2 regularization strength α; the dual SVM solver derives its
    /// penalty as C = 1 / (α·n).
    pub l2_alpha: f64,
    pub seed: u64,
    pub shuffle: bool,
}

impl Default for SgdConfig {
    fn default() -> Self {
        SgdConfig {
            epochs: 50,
            learning_rate: 0.1,
            l2_alpha: 1e-4,
            seed: 42,
            shuffle: true,
        }
    }
}

impl SgdConfig {
    /// MLP training runs longer by default; everything else matches.
    pub fn mlp_defaults() -> Self {
        SgdConfig {
            epochs: 200,
            ..SgdConfig::default()
        }
    }
}

/// A classification decision with its signed score: positive means OFF,
/// and exact ties resolve to NOT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    pub score: f64,
}

impl Prediction {
    /// Classify by sign; a score of exactly zero is NOT.
    pub fn from_score(score: f64) -> Self {
        let label = if score > 0.0 { Label::Off } else { Label::Not };
        Prediction { label, score }
    }
}

/// Training-time validation failures.
#[derive(Debug, thiserror::Error)]
pub enum TrainError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("{inputs} input vectors but {labels} labels")]
    LengthMismatch { inputs: usize, labels: usize },
    #[error("training set contains a single class; both OFF and NOT are required")]
    SingleClass,
    #[error("feature index {index} out of range for dimension {dim}")]
    DimensionMismatch { index: usize, dim: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// A feature index in the input exceeded the model dimension.
#[derive(Debug, thiserror::Error)]
#[error("feature index {index} out of range for model dimension {dim}")]
pub struct DimensionError {
    pub index: usize,
    pub dim: usize,
}

pub(crate) fn check_dim(x: &SparseVector, dim: usize) -> Result<(), DimensionError> {
    match x.max_index() {
        Some(index) if index >= dim => Err(DimensionError { index, dim }),
        _ => Ok(()),
    }
}

pub(crate) fn validate_training_inputs(
    x: &[SparseVector],
    y: &[Label],
    dim: usize,
) -> Result<(), TrainError> {
    if x.len() != y.len() {
        return Err(TrainError::LengthMismatch {
            inputs: x.len(),
            labels: y.len(),
        });
    }
    if x.is_empty() {
        return Err(TrainError::EmptyTrainingSet);
    }
    if y.iter().all(|&l| l == y[0]) {
        return Err(TrainError::SingleClass);
    }
    for xi in x {
        if let Err(e) = check_dim(xi, dim) {
            return Err(TrainError::DimensionMismatch {
                index: e.index,
                dim: e.dim,
            });
        }
    }
    Ok(())
}

/// One trained base classifier, tagged by the algorithm that produced it.
/// The two linear variants share a parameter shape but are distinct
/// systems with distinct solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseModel {
    LinearSgd(LinearModel),
    Svm(LinearModel),
    Mlp(MlpModel),
}

impl BaseModel {
    pub fn predict(&self, x: &SparseVector) -> Result<Prediction, DimensionError> {
        match self {
            BaseModel::LinearSgd(m) | BaseModel::Svm(m) => m.predict(x),
            BaseModel::Mlp(m) => m.predict(x),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BaseModel::LinearSgd(m) | BaseModel::Svm(m) => m.dim(),
            BaseModel::Mlp(m) => m.input_dim,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BaseModel::LinearSgd(_) => "linear_sgd",
            BaseModel::Svm(_) => "svm",
            BaseModel::Mlp(_) => "mlp",
        }
    }
}
