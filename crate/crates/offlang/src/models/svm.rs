//! Linear SVM trained by dual coordinate descent.
//!
//! Solves the batch form of the L2-regularized hinge objective,
//! `min_w (1/2)‖w‖² + C·Σ max(0, 1 − ỹᵢ·w·xᵢ)` with `C = 1/(α·n)`,
//! through its dual: one pass sweeps the examples in order and updates
//! each dual variable `αᵢ ∈ [0, C]` by an exact coordinate step, keeping
//! `w = Σ αᵢ·ỹᵢ·xᵢ` in sync. Passes repeat until the largest projected
//! gradient over a full pass drops below the tolerance or the pass cap is
//! reached. The sweep order is fixed, so training is deterministic.
//!
//! The dual solver fits no intercept: the decision function passes
//! through the origin and the returned model has bias 0.

use crate::corpus::Label;
use crate::vectorizer::SparseVector;

use super::{validate_training_inputs, LinearModel, SgdConfig, TrainError};

/// KKT violation below which a full pass counts as converged.
const DUAL_TOLERANCE: f64 = 1e-4;
/// Hard cap on sweeps over the training set.
const MAX_PASSES: usize = 1000;

/// Train the linear SVM. `cfg.l2_alpha` must be positive; it sets the
/// penalty as C = 1/(α·n). Epochs, learning rate and shuffle flags do not
/// apply to the dual solver.
pub fn train_svm_linear(
    x: &[SparseVector],
    y: &[Label],
    dim: usize,
    cfg: &SgdConfig,
) -> Result<LinearModel, TrainError> {
    validate_training_inputs(x, y, dim)?;
    if cfg.l2_alpha <= 0.0 {
        return Err(TrainError::InvalidConfig(
            "l2_alpha must be positive for the dual SVM solver".into(),
        ));
    }
    let n = x.len();
    let c = 1.0 / (cfg.l2_alpha * n as f64);

    let signed: Vec<f64> = y.iter().map(|l| l.signed()).collect();
    let q_diag: Vec<f64> = x.iter().map(|xi| xi.iter().map(|(_, v)| v * v).sum()).collect();

    let mut alpha = vec![0.0f64; n];
    let mut w = vec![0.0f64; dim];

    for _ in 0..MAX_PASSES {
        let mut worst = 0.0f64;
        for i in 0..n {
            let g = signed[i] * x[i].dot_dense(&w) - 1.0;
            let pg = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= c {
                g.max(0.0)
            } else {
                g
            };
            worst = worst.max(pg.abs());
            if pg == 0.0 {
                continue;
            }
            if q_diag[i] > 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / q_diag[i]).clamp(0.0, c);
                let delta = (alpha[i] - old) * signed[i];
                if delta != 0.0 {
                    for &(idx, v) in x[i].iter() {
                        w[idx] += delta * v;
                    }
                }
            } else {
                // Empty input vector: its dual term is linear in αᵢ with
                // slope −1, so the optimum sits at the upper bound. The
                // primal weights are unaffected.
                alpha[i] = c;
            }
        }
        if worst < DUAL_TOLERANCE {
            break;
        }
    }

    Ok(LinearModel {
        weights: w,
        bias: 0.0,
    })
}
