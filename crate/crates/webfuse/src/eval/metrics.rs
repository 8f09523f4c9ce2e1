//! Precision / recall / F1 over benchmark verdicts.
//!
//! Every question is answered and graded matched or unmatched, so false
//! negatives are fixed at zero and recall is 1 whenever anything matched.
//! F1 is then a function of precision alone: 2p / (1 + p).

use serde::{Deserialize, Serialize};

use super::comparator::MatchVerdict;
use super::EvalError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_count: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub n_questions: u64,
    pub mean_elapsed_s: f64,
}

impl MetricsReport {
    /// One summary line, precision/recall/F1 printed to two decimals.
    pub fn summary_line(&self) -> String {
        format!(
            "n={} tp={} fp={} precision={:.2} recall={:.2} f1={:.2} mean_elapsed_s={:.3}",
            self.n_questions, self.tp, self.fp, self.precision, self.recall, self.f1,
            self.mean_elapsed_s
        )
    }
}

/// Computes the report from verdicts alone; `mean_elapsed_s` is zero here
/// and filled in by callers that track timing (see the benchmark runner).
pub fn compute_metrics(verdicts: &[MatchVerdict]) -> Result<MetricsReport, EvalError> {
    let matched: Vec<bool> = verdicts.iter().map(|verdict| verdict.matched).collect();
    compute_metrics_from_matches(&matched, 0.0)
}

pub fn compute_metrics_from_matches(
    matched: &[bool],
    mean_elapsed_s: f64,
) -> Result<MetricsReport, EvalError> {
    if matched.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let tp = matched.iter().filter(|m| **m).count() as u64;
    let fp = matched.len() as u64 - tp;
    let fn_count = 0u64;
    let precision = tp as f64 / (tp + fp) as f64;
    let recall = if tp > 0 { 1.0 } else { 0.0 };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(MetricsReport {
        tp,
        fp,
        fn_count,
        precision,
        recall,
        f1,
        n_questions: matched.len() as u64,
        mean_elapsed_s,
    })
}
