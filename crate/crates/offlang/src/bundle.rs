//! Model persistence: a fitted vectorizer plus a trained classifier in a
//! versioned, self-describing UTF-8 text file.
//!
//! The on-disk format is pretty-printed JSON with named sections for the
//! vectorizer, the classifier parameters and the training configuration.
//! Reals are rendered with shortest round-trip precision, so a saved
//! bundle reloads to bit-identical predictions and re-saving a bundle
//! reproduces the file byte for byte.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ensemble::{EnsembleError, VotingEnsemble};
use crate::models::{BaseModel, LinearModel, MlpModel, Prediction, SgdConfig};
use crate::vectorizer::{SparseVector, TfidfVectorizer};

/// Current bundle file version.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum BundleError {
    #[error("cannot access model file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("unreadable model file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("model file version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("unreadable model file: {0}")]
    Invalid(String),
}

/// Trained classifier payload, tagged by kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedClassifier {
    LinearSgd(LinearModel),
    Svm(LinearModel),
    Mlp(MlpModel),
    Voting(VotingEnsemble),
}

impl TrainedClassifier {
    pub fn kind(&self) -> &'static str {
        match self {
            TrainedClassifier::LinearSgd(_) => "linear_sgd",
            TrainedClassifier::Svm(_) => "svm",
            TrainedClassifier::Mlp(_) => "mlp",
            TrainedClassifier::Voting(_) => "voting",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TrainedClassifier::LinearSgd(m) | TrainedClassifier::Svm(m) => m.dim(),
            TrainedClassifier::Mlp(m) => m.input_dim,
            TrainedClassifier::Voting(e) => e.dim(),
        }
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Prediction, EnsembleError> {
        match self {
            TrainedClassifier::LinearSgd(m) | TrainedClassifier::Svm(m) => Ok(m.predict(x)?),
            TrainedClassifier::Mlp(m) => Ok(m.predict(x)?),
            TrainedClassifier::Voting(e) => e.predict(x),
        }
    }
}

/// Everything needed to score raw text: vectorizer, classifier, and the
/// configuration the classifier was trained with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub format_version: u32,
    pub vectorizer: TfidfVectorizer,
    pub classifier: TrainedClassifier,
    pub training_config: SgdConfig,
}

fn check_linear(m: &LinearModel, dim: usize) -> Result<(), BundleError> {
    if m.dim() != dim {
        return Err(BundleError::Invalid(format!(
            "linear weights have dimension {} but the vocabulary has {dim} terms",
            m.dim()
        )));
    }
    Ok(())
}

fn check_mlp(m: &MlpModel, dim: usize) -> Result<(), BundleError> {
    if m.input_dim != dim {
        return Err(BundleError::Invalid(format!(
            "mlp input dimension {} does not match vocabulary size {dim}",
            m.input_dim
        )));
    }
    if m.hidden_size < 1
        || m.hidden_weights.len() != m.input_dim * m.hidden_size
        || m.hidden_bias.len() != m.hidden_size
        || m.output_weights.len() != m.hidden_size
    {
        return Err(BundleError::Invalid(
            "mlp parameter shapes are inconsistent".into(),
        ));
    }
    Ok(())
}

impl ModelBundle {
    pub fn new(
        vectorizer: TfidfVectorizer,
        classifier: TrainedClassifier,
        training_config: SgdConfig,
    ) -> Self {
        ModelBundle {
            format_version: FORMAT_VERSION,
            vectorizer,
            classifier,
            training_config,
        }
    }

    /// Structural integrity checks run after deserialization.
    pub fn validate(&self) -> Result<(), BundleError> {
        if self.format_version != FORMAT_VERSION {
            return Err(BundleError::Version {
                found: self.format_version,
                expected: FORMAT_VERSION,
            });
        }
        let vocab_len = self.vectorizer.vocab.len();
        if self.vectorizer.idf.len() != vocab_len {
            return Err(BundleError::Invalid(format!(
                "idf table has {} entries for {vocab_len} vocabulary terms",
                self.vectorizer.idf.len()
            )));
        }
        if !self.vectorizer.vocab.indices_are_dense() {
            return Err(BundleError::Invalid(
                "vocabulary indices are not dense".into(),
            ));
        }
        if !self.vectorizer.idf.iter().all(|v| v.is_finite()) {
            return Err(BundleError::Invalid("idf table has non-finite values".into()));
        }
        let range = self.vectorizer.range;
        if range.n_min() < 1 || range.n_max() < range.n_min() {
            return Err(BundleError::Invalid(format!(
                "invalid n-gram range ({}, {})",
                range.n_min(),
                range.n_max()
            )));
        }
        match &self.classifier {
            TrainedClassifier::LinearSgd(m) | TrainedClassifier::Svm(m) => {
                check_linear(m, vocab_len)?
            }
            TrainedClassifier::Mlp(m) => check_mlp(m, vocab_len)?,
            TrainedClassifier::Voting(e) => {
                if e.members.is_empty() {
                    return Err(BundleError::Invalid("voting ensemble has no members".into()));
                }
                for member in &e.members {
                    match member {
                        BaseModel::LinearSgd(m) | BaseModel::Svm(m) => {
                            check_linear(m, vocab_len)?
                        }
                        BaseModel::Mlp(m) => check_mlp(m, vocab_len)?,
                    }
                }
            }
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), BundleError> {
        let path = path.as_ref();
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).map_err(|source| BundleError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BundleError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| BundleError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let bundle: ModelBundle = serde_json::from_str(&text)?;
        bundle.validate()?;
        Ok(bundle)
    }
}
