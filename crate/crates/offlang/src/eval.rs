//! Per-class precision/recall/F1 and macro-F1.

use std::fmt::Write as _;

use crate::corpus::Label;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("{predictions} predictions but {gold} gold labels")]
    LengthMismatch { predictions: usize, gold: usize },
    #[error("cannot evaluate an empty prediction set")]
    Empty,
}

/// Counts with OFF treated as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub tp_off: usize,
    pub fp_off: usize,
    pub fn_off: usize,
    pub tn_off: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp_off + self.fp_off + self.fn_off + self.tn_off
    }
}

/// Precision, recall and F1 for one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Full evaluation: both per-class metric triples, their unweighted mean
/// F1, the raw counts, and any degenerate-ratio warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub off: ClassMetrics,
    pub not: ClassMetrics,
    pub macro_f1: f64,
    pub counts: ConfusionMatrix,
    /// 0/0 ratios reported as 0; one note per affected metric.
    pub warnings: Vec<String>,
}

fn ratio(num: usize, den: usize, what: &str, warnings: &mut Vec<String>) -> f64 {
    if den == 0 {
        warnings.push(format!("{what} is 0/0, reported as 0"));
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_metrics(
    tp: usize,
    fp: usize,
    fn_: usize,
    class: &str,
    warnings: &mut Vec<String>,
) -> ClassMetrics {
    let precision = ratio(tp, tp + fp, &format!("precision[{class}]"), warnings);
    let recall = ratio(tp, tp + fn_, &format!("recall[{class}]"), warnings);
    let f1 = if precision + recall == 0.0 {
        warnings.push(format!("f1[{class}] is 0/0, reported as 0"));
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        f1,
    }
}

/// Score predictions against gold labels, pairwise in order.
pub fn evaluate(predictions: &[Label], gold: &[Label]) -> Result<EvalReport, EvalError> {
    if predictions.len() != gold.len() {
        return Err(EvalError::LengthMismatch {
            predictions: predictions.len(),
            gold: gold.len(),
        });
    }
    if predictions.is_empty() {
        return Err(EvalError::Empty);
    }

    let mut counts = ConfusionMatrix::default();
    for (p, g) in predictions.iter().zip(gold) {
        match (p, g) {
            (Label::Off, Label::Off) => counts.tp_off += 1,
            (Label::Off, Label::Not) => counts.fp_off += 1,
            (Label::Not, Label::Off) => counts.fn_off += 1,
            (Label::Not, Label::Not) => counts.tn_off += 1,
        }
    }

    let mut warnings = Vec::new();
    let off = class_metrics(
        counts.tp_off,
        counts.fp_off,
        counts.fn_off,
        "OFF",
        &mut warnings,
    );
    // For NOT as positive: tp = tn_off, fp = fn_off, fn = fp_off.
    let not = class_metrics(
        counts.tn_off,
        counts.fn_off,
        counts.fp_off,
        "NOT",
        &mut warnings,
    );
    Ok(EvalReport {
        off,
        not,
        macro_f1: (off.f1 + not.f1) / 2.0,
        counts,
        warnings,
    })
}

impl EvalReport {
    /// Fixed-order human-readable table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "class  precision  recall  f1");
        let _ = writeln!(
            out,
            "OFF    {:>9.4}  {:>6.4}  {:.4}",
            self.off.precision, self.off.recall, self.off.f1
        );
        let _ = writeln!(
            out,
            "NOT    {:>9.4}  {:>6.4}  {:.4}",
            self.not.precision, self.not.recall, self.not.f1
        );
        let _ = writeln!(out, "macro-F1: {:.4}", self.macro_f1);
        out
    }

    /// Machine-readable block: one `key value` line per metric.
    pub fn render_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "precision_off {:.6}", self.off.precision);
        let _ = writeln!(out, "recall_off {:.6}", self.off.recall);
        let _ = writeln!(out, "f1_off {:.6}", self.off.f1);
        let _ = writeln!(out, "precision_not {:.6}", self.not.precision);
        let _ = writeln!(out, "recall_not {:.6}", self.not.recall);
        let _ = writeln!(out, "f1_not {:.6}", self.not.f1);
        let _ = writeln!(out, "macro_f1 {:.6}", self.macro_f1);
        let _ = writeln!(out, "tp_off {}", self.counts.tp_off);
        let _ = writeln!(out, "fp_off {}", self.counts.fp_off);
        let _ = writeln!(out, "fn_off {}", self.counts.fn_off);
        let _ = writeln!(out, "tn_off {}", self.counts.tn_off);
        out
    }
}
