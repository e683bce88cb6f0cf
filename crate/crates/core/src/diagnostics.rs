//! Geweke convergence diagnostics over scalar walk-metric traces.
//!
//! The Z-score compares the mean of an early window against the mean of a
//! late window of the same series, normalized by the sum of their variances.
//! A chain is declared converged once the Z-scores of every monitored metric
//! have stayed inside `[-z_bound, z_bound]` for `window` consecutive
//! iterations.

use serde::{Deserialize, Serialize};

/// The scalar pattern properties monitored during a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    NeighborCount,
    FrequentNeighborCount,
    VertexCount,
}

impl MetricName {
    pub const ALL: [MetricName; 3] = [
        MetricName::NeighborCount,
        MetricName::FrequentNeighborCount,
        MetricName::VertexCount,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricName::NeighborCount => "neighbor_count",
            MetricName::FrequentNeighborCount => "frequent_neighbor_count",
            MetricName::VertexCount => "vertex_count",
        }
    }
}

/// One metric's per-iteration series.
#[derive(Debug, Clone)]
pub struct MetricTrace {
    pub name: MetricName,
    pub values: Vec<f64>,
}

impl MetricTrace {
    pub fn new(name: MetricName) -> Self {
        Self {
            name,
            values: Vec::new(),
        }
    }
}

/// Window shapes and thresholds for the convergence declaration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePolicy {
    /// Fraction of the series forming the early window.
    pub first_frac: f64,
    /// Fraction of the series forming the late window.
    pub last_frac: f64,
    /// Number of consecutive in-bound iterations required.
    pub window: usize,
    /// The |Z| threshold.
    pub z_bound: f64,
    /// No verdict is attempted before this many iterations.
    pub min_iterations: usize,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        Self {
            first_frac: 0.1,
            last_frac: 0.5,
            window: 20,
            z_bound: 1.0,
            min_iterations: 100,
        }
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance (divide by n, no Bessel correction).
fn pop_var(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// The Geweke Z-score of a series under the policy's windows, or `None` when
/// the series is too short to evaluate.
///
/// Zero-variance handling: equal window means give `Z = 0`; unequal means
/// give an infinite sentinel that no bound accepts.
pub fn geweke_z(values: &[f64], policy: &ConvergencePolicy) -> Option<f64> {
    let n = values.len();
    if n < policy.min_iterations {
        return None;
    }
    let n1 = (n as f64 * policy.first_frac).floor() as usize;
    let n2 = (n as f64 * policy.last_frac).floor() as usize;
    if n1 == 0 || n2 == 0 || n1 + n2 > n {
        return None;
    }
    let x1 = &values[..n1];
    let x2 = &values[n - n2..];
    let (m1, m2) = (mean(x1), mean(x2));
    let denom = pop_var(x1, m1) + pop_var(x2, m2);
    if denom == 0.0 {
        return Some(if m1 == m2 { 0.0 } else { f64::INFINITY });
    }
    Some((m1 - m2) / denom.sqrt())
}

/// True once every trace's Z-score has been inside the bound at each of the
/// last `window` iterations, recomputing Z on the growing series.
pub fn converged(traces: &[MetricTrace], policy: &ConvergencePolicy) -> bool {
    if traces.is_empty() {
        return false;
    }
    for trace in traces {
        let n = trace.values.len();
        if n < policy.window || n < policy.min_iterations {
            return false;
        }
        for t in (n - policy.window)..n {
            match geweke_z(&trace.values[..=t], policy) {
                Some(z) if z.abs() <= policy.z_bound => {}
                _ => return false,
            }
        }
    }
    true
}

/// Renders traces as CSV rows `iteration,metric,value,z`, with `z` empty
/// while the series is too short to score.
pub fn trace_csv(traces: &[MetricTrace], policy: &ConvergencePolicy) -> String {
    let mut out = String::from("iteration,metric,value,z\n");
    for trace in traces {
        for t in 0..trace.values.len() {
            let z = geweke_z(&trace.values[..=t], policy)
                .map(|z| format!("{z}"))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                t,
                trace.name.as_str(),
                trace.values[t],
                z
            ));
        }
    }
    out
}
