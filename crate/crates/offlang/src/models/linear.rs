//! Linear classifier trained by stochastic gradient descent on
//! L2-regularized hinge loss.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::vectorizer::SparseVector;

use super::{check_dim, validate_training_inputs, DimensionError, Prediction, SgdConfig, TrainError};

/// A linear decision function `score(x) = w·x + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Signed score `w·x + b`; OFF iff the score is strictly positive.
    pub fn predict(&self, x: &SparseVector) -> Result<Prediction, DimensionError> {
        check_dim(x, self.weights.len())?;
        Ok(Prediction::from_score(x.dot_dense(&self.weights) + self.bias))
    }
}

/// Train on the per-example objective
/// `(α/2)·‖w‖² + max(0, 1 − ỹ·(w·x + b))` with ỹ = +1 for OFF and −1 for
/// NOT. Each example takes one subgradient step at rate
/// `η_t = η₀ / (1 + η₀·α·t)` where t counts steps across epochs; the bias
/// is not regularized. Examples are reshuffled every epoch with the
/// seeded generator when `cfg.shuffle` is set.
pub fn train_linear_sgd(
    x: &[SparseVector],
    y: &[Label],
    dim: usize,
    cfg: &SgdConfig,
) -> Result<LinearModel, TrainError> {
    validate_training_inputs(x, y, dim)?;
    if cfg.epochs < 1 {
        return Err(TrainError::InvalidConfig("epochs must be >= 1".into()));
    }
    if cfg.learning_rate <= 0.0 {
        return Err(TrainError::InvalidConfig(
            "learning rate must be positive".into(),
        ));
    }
    if cfg.l2_alpha < 0.0 {
        return Err(TrainError::InvalidConfig(
            "l2_alpha must be nonnegative".into(),
        ));
    }

    let signed: Vec<f64> = y.iter().map(|l| l.signed()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..x.len()).collect();

    // w is kept as scale·v so the L2 decay is O(1) per step instead of
    // O(dim); only the coordinates in an example's support are touched.
    let mut v = vec![0.0f64; dim];
    let mut scale = 1.0f64;
    let mut bias = 0.0f64;
    let mut t = 0u64;

    for _ in 0..cfg.epochs {
        if cfg.shuffle {
            order.shuffle(&mut rng);
        }
        for &i in &order {
            let eta = cfg.learning_rate / (1.0 + cfg.learning_rate * cfg.l2_alpha * t as f64);
            let margin = signed[i] * (scale * x[i].dot_dense(&v) + bias);
            scale *= 1.0 - eta * cfg.l2_alpha;
            if scale.abs() < 1e-9 {
                // Fold the scale into v before it underflows.
                for w in &mut v {
                    *w *= scale;
                }
                scale = 1.0;
            }
            if margin < 1.0 {
                let coef = eta * signed[i] / scale;
                for &(idx, val) in x[i].iter() {
                    v[idx] += coef * val;
                }
                bias += eta * signed[i];
            }
            t += 1;
        }
    }

    let weights = v.into_iter().map(|w| w * scale).collect();
    Ok(LinearModel { weights, bias })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn off_not(pattern: &[i8]) -> Vec<Label> {
        pattern
            .iter()
            .map(|&s| if s > 0 { Label::Off } else { Label::Not })
            .collect()
    }

    fn separable_pair() -> (Vec<SparseVector>, Vec<Label>) {
        let mut x = Vec::new();
        let mut signs = Vec::new();
        for _ in 0..10 {
            x.push(SparseVector::from_pairs(vec![(0, 1.0)]));
            signs.push(1);
            x.push(SparseVector::from_pairs(vec![(0, -1.0)]));
            signs.push(-1);
        }
        (x, off_not(&signs))
    }

    #[test]
    fn separable_set_is_fit_perfectly() {
        let (x, y) = separable_pair();
        let model = train_linear_sgd(&x, &y, 2, &SgdConfig::default()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(model.predict(xi).unwrap().label, *yi);
        }
    }

    #[test]
    fn same_seed_gives_bitwise_identical_weights() {
        let (x, y) = separable_pair();
        let cfg = SgdConfig::default();
        let a = train_linear_sgd(&x, &y, 2, &cfg).unwrap();
        let b = train_linear_sgd(&x, &y, 2, &cfg).unwrap();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.bias, b.bias);
    }

    /// With α = 0 the learning rate is constant and every margin
    /// violation moves the weights by exactly η·ỹ·x on the support.
    #[test]
    fn update_direction_is_signed_input_on_violation() {
        let x = vec![
            SparseVector::from_pairs(vec![(0, 0.6), (2, 0.8)]),
            SparseVector::from_pairs(vec![(1, 1.0)]),
        ];
        let y = off_not(&[1, -1]);
        let cfg = SgdConfig {
            epochs: 1,
            learning_rate: 0.1,
            l2_alpha: 0.0,
            shuffle: false,
            ..SgdConfig::default()
        };
        let model = train_linear_sgd(&x, &y, 3, &cfg).unwrap();
        // Step 1: margin 0 < 1 → w = 0.1·(+1)·x₀. Step 2: margin
        // −0.1 < 1 → w[1] = 0.1·(−1)·1, bias = 0.1 − 0.1 = 0.
        assert!((model.weights[0] - 0.06).abs() < 1e-12);
        assert!((model.weights[1] + 0.1).abs() < 1e-12);
        assert!((model.weights[2] - 0.08).abs() < 1e-12);
        assert!(model.bias.abs() < 1e-12);
    }

    /// A third example whose margin is already >= 1 must leave the model
    /// exactly where the first two steps put it (α = 0).
    #[test]
    fn satisfied_margin_takes_no_step() {
        let base = vec![
            SparseVector::from_pairs(vec![(0, 1.0)]),
            SparseVector::from_pairs(vec![(0, -1.0)]),
        ];
        let labels = off_not(&[1, -1]);
        let cfg = SgdConfig {
            epochs: 1,
            learning_rate: 1.0,
            l2_alpha: 0.0,
            shuffle: false,
            ..SgdConfig::default()
        };
        let two = train_linear_sgd(&base, &labels, 1, &cfg).unwrap();

        // After those two steps w = 2, b = 0, so x₀'s margin is 2 ≥ 1.
        let mut extended = base.clone();
        extended.push(SparseVector::from_pairs(vec![(0, 1.0)]));
        let mut labels3 = labels.clone();
        labels3.push(Label::Off);
        let three = train_linear_sgd(&extended, &labels3, 1, &cfg).unwrap();

        assert_eq!(two.weights, three.weights);
        assert_eq!(two.bias, three.bias);
    }

    #[test]
    fn single_class_training_is_rejected() {
        let x = vec![SparseVector::from_pairs(vec![(0, 1.0)])];
        let err = train_linear_sgd(&x, &[Label::Off], 1, &SgdConfig::default()).unwrap_err();
        assert!(matches!(err, TrainError::SingleClass));
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let x = vec![
            SparseVector::from_pairs(vec![(5, 1.0)]),
            SparseVector::from_pairs(vec![(0, -1.0)]),
        ];
        let y = off_not(&[1, -1]);
        let err = train_linear_sgd(&x, &y, 2, &SgdConfig::default()).unwrap_err();
        assert!(matches!(
            err,
            TrainError::DimensionMismatch { index: 5, dim: 2 }
        ));
    }

    #[test]
    fn predict_scores_and_tie_break() {
        let model = LinearModel {
            weights: vec![1.0, 0.0],
            bias: 0.0,
        };
        let p = model
            .predict(&SparseVector::from_pairs(vec![(0, 0.5)]))
            .unwrap();
        assert_eq!(p.label, Label::Off);
        assert!((p.score - 0.5).abs() < 1e-15);

        // Empty input: bias decides.
        let biased = LinearModel {
            weights: vec![1.0, 0.0],
            bias: -0.2,
        };
        let p = biased.predict(&SparseVector::empty()).unwrap();
        assert_eq!(p.label, Label::Not);
        assert!((p.score + 0.2).abs() < 1e-15);

        // Exactly zero is NOT.
        let p = model.predict(&SparseVector::empty()).unwrap();
        assert_eq!(p.score, 0.0);
        assert_eq!(p.label, Label::Not);
    }

    #[test]
    fn predict_rejects_out_of_range_indices() {
        let model = LinearModel {
            weights: vec![1.0],
            bias: 0.0,
        };
        let err = model
            .predict(&SparseVector::from_pairs(vec![(3, 1.0)]))
            .unwrap_err();
        assert_eq!((err.index, err.dim), (3, 1));
    }
}
