//! Offensive-language detection for Arabic tweets.
//!
//! The pipeline has four stages:
//!
//! 1. [`preprocess`] — placeholder removal, punctuation/digit stripping,
//!    elongation collapse, whitespace tokenization.
//! 2. [`vectorizer`] — word 1/2/3-gram TF-IDF features as L2-normalized
//!    sparse vectors.
//! 3. [`models`] / [`ensemble`] — a linear classifier trained by SGD on
//!    hinge loss, a linear SVM trained by dual coordinate descent, a
//!    one-hidden-layer logistic MLP, and a hard-voting ensemble of the
//!    three.
//! 4. [`eval`] — per-class precision/recall/F1 and macro-F1.
//!
//! [`corpus`] loads tab-separated tweet datasets and [`bundle`] persists a
//! fitted vectorizer together with a trained classifier as a versioned
//! text file. The `offlang` binary wires these into `stats`, `preprocess`,
//! `train`, `evaluate`, `predict` and `compare` commands.

pub mod bundle;
pub mod corpus;
pub mod ensemble;
pub mod eval;
pub mod models;
pub mod preprocess;
pub mod vectorizer;

pub use corpus::{ClassCounts, Dataset, Label, LabeledExample, Schema};
pub use ensemble::VotingEnsemble;
pub use eval::EvalReport;
pub use models::{LinearModel, MlpModel, Prediction, SgdConfig};
pub use preprocess::TokenSequence;
pub use vectorizer::{NgramRange, SparseVector, TfidfVectorizer};
