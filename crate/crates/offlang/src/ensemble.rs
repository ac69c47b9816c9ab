//! Hard-voting combination of trained base classifiers.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::models::{BaseModel, DimensionError, Prediction};
use crate::vectorizer::SparseVector;

#[derive(Debug, thiserror::Error)]
pub enum EnsembleError {
    #[error("cannot vote over an empty sequence")]
    EmptyVotes,
    #[error("ensemble needs at least one member")]
    EmptyEnsemble,
    #[error("ensemble members disagree on feature dimensionality ({0} vs {1})")]
    MixedDimensions(usize, usize),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
}

/// Majority label; an exact tie resolves to NOT, the majority class.
pub fn hard_vote(votes: &[Label]) -> Result<Label, EnsembleError> {
    if votes.is_empty() {
        return Err(EnsembleError::EmptyVotes);
    }
    let off = votes.iter().filter(|&&l| l == Label::Off).count();
    let not = votes.len() - off;
    Ok(if off > not { Label::Off } else { Label::Not })
}

/// An ordered committee of trained predictors sharing one feature space.
/// The default committee is linear SGD, SVM and MLP, in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VotingEnsemble {
    pub members: Vec<BaseModel>,
}

impl VotingEnsemble {
    pub fn new(members: Vec<BaseModel>) -> Result<Self, EnsembleError> {
        let first = match members.first() {
            Some(m) => m.dim(),
            None => return Err(EnsembleError::EmptyEnsemble),
        };
        for m in &members {
            if m.dim() != first {
                return Err(EnsembleError::MixedDimensions(first, m.dim()));
            }
        }
        Ok(VotingEnsemble { members })
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// Label by majority vote; the score is the OFF vote share minus 0.5,
    /// so its sign agrees with the label under the NOT tie-break.
    pub fn predict(&self, x: &SparseVector) -> Result<Prediction, EnsembleError> {
        let mut votes = Vec::with_capacity(self.members.len());
        for member in &self.members {
            votes.push(member.predict(x)?.label);
        }
        let label = hard_vote(&votes)?;
        let off = votes.iter().filter(|&&l| l == Label::Off).count();
        let score = off as f64 / votes.len() as f64 - 0.5;
        Ok(Prediction { label, score })
    }
}
