//! Output-quality metrics: tie-tolerant precision, relative support error,
//! and total variation distance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::miner::MiningResult;
use crate::pattern::Pattern;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("output has {got} patterns, expected k = {expected}")]
    SizeMismatch { got: usize, expected: usize },
    #[error("probability vectors have different lengths ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("vector does not sum to 1 (sum = {0})")]
    NotNormalized(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternEval {
    pub code: String,
    pub true_support: usize,
    /// Tie-tolerant membership: true support at least the threshold. Counting
    /// strict set membership instead would punish arbitrary choices among
    /// patterns tied at the threshold.
    pub in_truth: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub rse: f64,
    pub support_accuracy: f64,
    pub per_pattern: Vec<PatternEval>,
}

/// Scores k output patterns (with their exact supports) against the exact
/// top-k. `precision` is the fraction with true support at least `f`;
/// `rse` is `(S_true - S_out) / (k * f)` over the support sums, and
/// `support_accuracy = 1 - rse`.
pub fn evaluate(
    output: &[(Pattern, usize)],
    truth: &MiningResult,
    f: usize,
    k: usize,
) -> Result<EvalReport, EvalError> {
    if output.len() != k {
        return Err(EvalError::SizeMismatch {
            got: output.len(),
            expected: k,
        });
    }
    let per_pattern: Vec<PatternEval> = output
        .iter()
        .map(|(p, sup)| PatternEval {
            code: p.code().to_string(),
            true_support: *sup,
            in_truth: *sup >= f,
        })
        .collect();
    let hits = per_pattern.iter().filter(|e| e.in_truth).count();
    let precision = hits as f64 / k as f64;
    let s_true: usize = truth.patterns.iter().map(|&(_, s)| s).sum();
    let s_out: usize = output.iter().map(|&(_, s)| s).sum();
    let rse = (s_true as f64 - s_out as f64) / (k as f64 * f as f64);
    Ok(EvalReport {
        precision,
        rse,
        support_accuracy: 1.0 - rse,
        per_pattern,
    })
}

/// Total variation distance between two probability vectors over the same
/// index set: half the L1 distance.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64, EvalError> {
    if p.len() != q.len() {
        return Err(EvalError::DimensionMismatch(p.len(), q.len()));
    }
    for v in [p, q] {
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(EvalError::NotNormalized(sum));
        }
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
}
