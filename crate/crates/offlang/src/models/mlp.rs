//! One-hidden-layer perceptron with logistic activations, trained by
//! mini-batch SGD on binary cross-entropy with OFF mapped to 1.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::vectorizer::SparseVector;

use super::{check_dim, validate_training_inputs, DimensionError, Prediction, SgdConfig, TrainError};

/// Hidden layer width used when no size is requested.
pub const DEFAULT_HIDDEN_SIZE: usize = 60;
/// Mini-batch size of the trainer.
pub const MLP_BATCH_SIZE: usize = 32;

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Network parameters. The hidden weight matrix (h × input_dim) is stored
/// flat in column-major order: the weight from input feature `j` to
/// hidden unit `u` lives at `hidden_weights[j * hidden_size + u]`, so a
/// sparse input touches contiguous slices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub hidden_weights: Vec<f64>,
    pub hidden_bias: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
    pub hidden_size: usize,
    pub input_dim: usize,
}

/// Loss gradients with the same layout as the corresponding model fields.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGradients {
    pub hidden_weights: Vec<f64>,
    pub hidden_bias: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
}

impl MlpModel {
    /// Flat index of the hidden weight from input `feature` to `unit`.
    pub fn hidden_weight_index(&self, unit: usize, feature: usize) -> usize {
        feature * self.hidden_size + unit
    }

    fn hidden_activations(&self, x: &SparseVector) -> Vec<f64> {
        let mut z = self.hidden_bias.clone();
        for &(j, v) in x.iter() {
            let col = &self.hidden_weights[j * self.hidden_size..(j + 1) * self.hidden_size];
            for (zu, wu) in z.iter_mut().zip(col) {
                *zu += wu * v;
            }
        }
        for zu in &mut z {
            *zu = sigmoid(*zu);
        }
        z
    }

    /// Probability that the input is OFF: `σ(w₂·σ(W₁x + b₁) + b₂)`.
    pub fn probability(&self, x: &SparseVector) -> Result<f64, DimensionError> {
        check_dim(x, self.input_dim)?;
        let hidden = self.hidden_activations(x);
        let z = self
            .output_weights
            .iter()
            .zip(&hidden)
            .map(|(w, a)| w * a)
            .sum::<f64>()
            + self.output_bias;
        Ok(sigmoid(z))
    }

    /// OFF iff p > 0.5; the score is p − 0.5 so exact ties land on NOT.
    pub fn predict(&self, x: &SparseVector) -> Result<Prediction, DimensionError> {
        let p = self.probability(x)?;
        Ok(Prediction::from_score(p - 0.5))
    }

    /// Binary cross-entropy against `target` ∈ {0.0, 1.0}.
    pub fn loss(&self, x: &SparseVector, target: f64) -> Result<f64, DimensionError> {
        let p = self.probability(x)?.clamp(1e-12, 1.0 - 1e-12);
        Ok(-(target * p.ln() + (1.0 - target) * (1.0 - p).ln()))
    }

    /// Analytic gradient of the cross-entropy loss for one example.
    pub fn gradients(&self, x: &SparseVector, target: f64) -> Result<MlpGradients, DimensionError> {
        check_dim(x, self.input_dim)?;
        let hidden = self.hidden_activations(x);
        let z = self
            .output_weights
            .iter()
            .zip(&hidden)
            .map(|(w, a)| w * a)
            .sum::<f64>()
            + self.output_bias;
        let p = sigmoid(z);

        let d_out = p - target;
        let grad_output_weights: Vec<f64> = hidden.iter().map(|a| d_out * a).collect();
        let d_hidden: Vec<f64> = self
            .output_weights
            .iter()
            .zip(&hidden)
            .map(|(w, a)| d_out * w * a * (1.0 - a))
            .collect();

        let mut grad_hidden_weights = vec![0.0; self.hidden_weights.len()];
        for &(j, v) in x.iter() {
            let col = &mut grad_hidden_weights[j * self.hidden_size..(j + 1) * self.hidden_size];
            for (g, d) in col.iter_mut().zip(&d_hidden) {
                *g = d * v;
            }
        }

        Ok(MlpGradients {
            hidden_weights: grad_hidden_weights,
            hidden_bias: d_hidden,
            output_weights: grad_output_weights,
            output_bias: d_out,
        })
    }
}

/// Train the MLP by mini-batch SGD (batch 32, constant learning rate).
///
/// Weights start from a seeded uniform(−r, r) draw with
/// `r = √(6 / (fan_in + fan_out))` per layer and biases start at zero;
/// the hidden layer is drawn first, in flat storage order. Examples are
/// reshuffled every epoch with the same seeded generator. Each batch
/// applies the mean gradient of its examples, all evaluated at the
/// batch-start parameters. `cfg.l2_alpha` does not apply: the MLP
/// minimizes plain cross-entropy.
pub fn train_mlp(
    x: &[SparseVector],
    y: &[Label],
    dim: usize,
    hidden_size: usize,
    cfg: &SgdConfig,
) -> Result<MlpModel, TrainError> {
    validate_training_inputs(x, y, dim)?;
    if hidden_size < 1 {
        return Err(TrainError::InvalidConfig("hidden size must be >= 1".into()));
    }
    if cfg.epochs < 1 {
        return Err(TrainError::InvalidConfig("epochs must be >= 1".into()));
    }
    if cfg.learning_rate <= 0.0 {
        return Err(TrainError::InvalidConfig(
            "learning rate must be positive".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r_hidden = (6.0 / (dim + hidden_size) as f64).sqrt();
    let r_output = (6.0 / (hidden_size + 1) as f64).sqrt();
    let mut model = MlpModel {
        hidden_weights: (0..dim * hidden_size)
            .map(|_| rng.gen_range(-r_hidden..r_hidden))
            .collect(),
        hidden_bias: vec![0.0; hidden_size],
        output_weights: (0..hidden_size)
            .map(|_| rng.gen_range(-r_output..r_output))
            .collect(),
        output_bias: 0.0,
        hidden_size,
        input_dim: dim,
    };

    let targets: Vec<f64> = y
        .iter()
        .map(|l| if *l == Label::Off { 1.0 } else { 0.0 })
        .collect();
    let mut order: Vec<usize> = (0..x.len()).collect();

    for _ in 0..cfg.epochs {
        if cfg.shuffle {
            order.shuffle(&mut rng);
        }
        for batch in order.chunks(MLP_BATCH_SIZE) {
            let step = cfg.learning_rate / batch.len() as f64;

            // Forward every example at the batch-start parameters.
            let snapshots: Vec<(usize, Vec<f64>, f64)> = batch
                .iter()
                .map(|&i| {
                    let hidden = model.hidden_activations(&x[i]);
                    let z = model
                        .output_weights
                        .iter()
                        .zip(&hidden)
                        .map(|(w, a)| w * a)
                        .sum::<f64>()
                        + model.output_bias;
                    (i, hidden, sigmoid(z))
                })
                .collect();

            // Backward: per-example hidden deltas against the snapshot.
            let deltas: Vec<(usize, f64, Vec<f64>)> = snapshots
                .iter()
                .map(|(i, hidden, p)| {
                    let d_out = p - targets[*i];
                    let d_hidden: Vec<f64> = model
                        .output_weights
                        .iter()
                        .zip(hidden)
                        .map(|(w, a)| d_out * w * a * (1.0 - a))
                        .collect();
                    (*i, d_out, d_hidden)
                })
                .collect();

            // Output layer update from the accumulated batch gradient.
            for ((_, hidden, _), (_, d_out, _)) in snapshots.iter().zip(&deltas) {
                for (w, a) in model.output_weights.iter_mut().zip(hidden) {
                    *w -= step * d_out * a;
                }
                model.output_bias -= step * d_out;
            }

            // Hidden layer update; contributions only touch each
            // example's support columns.
            for (i, _, d_hidden) in &deltas {
                for &(j, v) in x[*i].iter() {
                    let col = &mut model.hidden_weights
                        [j * model.hidden_size..(j + 1) * model.hidden_size];
                    for (w, d) in col.iter_mut().zip(d_hidden) {
                        *w -= step * d * v;
                    }
                }
                for (b, d) in model.hidden_bias.iter_mut().zip(d_hidden) {
                    *b -= step * d;
                }
            }
        }
    }

    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_data() -> (Vec<SparseVector>, Vec<Label>) {
        let x = vec![
            SparseVector::empty(),
            SparseVector::from_pairs(vec![(0, 1.0)]),
            SparseVector::from_pairs(vec![(1, 1.0)]),
            SparseVector::from_pairs(vec![(0, 1.0), (1, 1.0)]),
        ];
        let y = vec![Label::Not, Label::Off, Label::Off, Label::Not];
        (x, y)
    }

    #[test]
    fn xor_is_learned_through_the_hidden_layer() {
        let (x, y) = xor_data();
        let cfg = SgdConfig {
            epochs: 5000,
            learning_rate: 2.0,
            ..SgdConfig::default()
        };
        let model = train_mlp(&x, &y, 2, 4, &cfg).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(model.predict(xi).unwrap().label, *yi);
        }
    }

    #[test]
    fn same_seed_gives_identical_parameters() {
        let (x, y) = xor_data();
        let cfg = SgdConfig {
            epochs: 20,
            ..SgdConfig::default()
        };
        let a = train_mlp(&x, &y, 2, 3, &cfg).unwrap();
        let b = train_mlp(&x, &y, 2, 3, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_parameters_predict_not_at_exactly_half() {
        let model = MlpModel {
            hidden_weights: vec![0.0; 6],
            hidden_bias: vec![0.0; 3],
            output_weights: vec![0.0; 3],
            output_bias: 0.0,
            hidden_size: 3,
            input_dim: 2,
        };
        let p = model
            .predict(&SparseVector::from_pairs(vec![(0, 2.0)]))
            .unwrap();
        assert_eq!(p.label, Label::Not);
        assert_eq!(p.score, 0.0);
    }

    #[test]
    fn saturated_output_bias_forces_off() {
        let model = MlpModel {
            hidden_weights: vec![0.0; 6],
            hidden_bias: vec![0.0; 3],
            output_weights: vec![0.0; 3],
            output_bias: 30.0,
            hidden_size: 3,
            input_dim: 2,
        };
        for x in [
            SparseVector::empty(),
            SparseVector::from_pairs(vec![(1, -5.0)]),
        ] {
            assert_eq!(model.predict(&x).unwrap().label, Label::Off);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let model = MlpModel {
            hidden_weights: vec![0.0; 2],
            hidden_bias: vec![0.0; 2],
            output_weights: vec![0.0; 2],
            output_bias: 0.0,
            hidden_size: 2,
            input_dim: 1,
        };
        assert!(model
            .predict(&SparseVector::from_pairs(vec![(4, 1.0)]))
            .is_err());
    }

    /// Flat view over all parameters, in model field order.
    fn param_mut(m: &mut MlpModel, k: usize) -> &mut f64 {
        let hw = m.hidden_weights.len();
        let hb = m.hidden_bias.len();
        let ow = m.output_weights.len();
        if k < hw {
            &mut m.hidden_weights[k]
        } else if k < hw + hb {
            &mut m.hidden_bias[k - hw]
        } else if k < hw + hb + ow {
            &mut m.output_weights[k - hw - hb]
        } else {
            &mut m.output_bias
        }
    }

    fn grad_at(g: &MlpGradients, k: usize) -> f64 {
        let hw = g.hidden_weights.len();
        let hb = g.hidden_bias.len();
        let ow = g.output_weights.len();
        if k < hw {
            g.hidden_weights[k]
        } else if k < hw + hb {
            g.hidden_bias[k - hw]
        } else if k < hw + hb + ow {
            g.output_weights[k - hw - hb]
        } else {
            g.output_bias
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let dim = rng.gen_range(1..=10);
            let hidden = rng.gen_range(1..=5);
            let model = MlpModel {
                hidden_weights: (0..dim * hidden).map(|_| rng.gen_range(-0.9..0.9)).collect(),
                hidden_bias: (0..hidden).map(|_| rng.gen_range(-0.5..0.5)).collect(),
                output_weights: (0..hidden).map(|_| rng.gen_range(-0.9..0.9)).collect(),
                output_bias: rng.gen_range(-0.5..0.5),
                hidden_size: hidden,
                input_dim: dim,
            };
            let mut pairs = Vec::new();
            for j in 0..dim {
                if rng.gen_bool(0.7) {
                    pairs.push((j, rng.gen_range(-1.0..1.0)));
                }
            }
            let x = SparseVector::from_pairs(pairs);
            let target = if rng.gen_bool(0.5) { 1.0 } else { 0.0 };
            let analytic = model.gradients(&x, target).unwrap();

            let eps = 1e-5;
            let n_params = dim * hidden + hidden + hidden + 1;
            for k in 0..n_params {
                let mut up = model.clone();
                *param_mut(&mut up, k) += eps;
                let mut down = model.clone();
                *param_mut(&mut down, k) -= eps;
                let numeric = (up.loss(&x, target).unwrap() - down.loss(&x, target).unwrap())
                    / (2.0 * eps);
                let grad = grad_at(&analytic, k);
                let denom = grad.abs().max(numeric.abs()).max(1e-8);
                assert!(
                    (numeric - grad).abs() / denom < 1e-4,
                    "param {k}: analytic={grad}, numeric={numeric}"
                );
            }
        }
    }
}
