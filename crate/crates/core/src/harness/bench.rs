//! Benchmark driver comparing the neighbor exploration strategies on one
//! shared walk trajectory.
//!
//! Every strategy classifies the same sequence of states (same seed, same
//! proposals), so wall time and matcher-call counts are directly comparable,
//! and any disagreement between partitions is an oracle violation that aborts
//! the run.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::GraphDataset;
use crate::graph::RuleSet;
use crate::iso::Matcher;
use crate::neighborhood::{explore, ExclusionSet, ExploreMethod};
use crate::sampler::{
    accept_prob, initial_pattern, proposal_mass, propose, PrivacyBudget, ProposalParams,
    SampleError, ScoreFunction,
};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("partitions diverge at step {step}: {a} vs {b}")]
    OracleViolation {
        step: usize,
        a: &'static str,
        b: &'static str,
    },
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// One (step, method) measurement.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub step: usize,
    pub method: &'static str,
    pub pattern_code: String,
    pub iso_calls: u64,
    pub micros: u128,
}

#[derive(Debug, Clone)]
pub struct BenchParams {
    pub methods: Vec<ExploreMethod>,
    pub n_steps: usize,
    pub seed: u64,
    pub proposal: ProposalParams,
    pub budget: PrivacyBudget,
    pub score: ScoreFunction,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// The per-step CSV: `step,method,iso_calls,micros`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,method,iso_calls,micros\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.step, r.method, r.iso_calls, r.micros
            ));
        }
        out
    }

    /// The per-call CSV with the explored pattern's code:
    /// `method,pattern_code,iso_calls,micros`.
    pub fn to_per_call_csv(&self) -> String {
        let mut out = String::from("method,pattern_code,iso_calls,micros\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.method, r.pattern_code, r.iso_calls, r.micros
            ));
        }
        out
    }

    pub fn mean_micros(&self, method: ExploreMethod) -> f64 {
        let rows: Vec<&BenchRow> = self
            .rows
            .iter()
            .filter(|r| r.method == method.name())
            .collect();
        if rows.is_empty() {
            return 0.0;
        }
        rows.iter().map(|r| r.micros as f64).sum::<f64>() / rows.len() as f64
    }

    pub fn total_calls(&self, method: ExploreMethod) -> u64 {
        self.rows
            .iter()
            .filter(|r| r.method == method.name())
            .map(|r| r.iso_calls)
            .sum()
    }
}

/// Walks `n_steps` MH transitions and times every strategy's classification
/// of each visited state. Exploration runs single-threaded relative to the
/// walk for fair timing; the walk itself advances off the first method's
/// partition after asserting all partitions equal.
pub fn bench_neighbors(
    d: &GraphDataset,
    f: usize,
    rules: &RuleSet,
    params: &BenchParams,
) -> Result<BenchReport, BenchError> {
    assert!(!params.methods.is_empty(), "need at least one method");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let excl = ExclusionSet::new();
    let support_matcher = Matcher::new();

    let mut current = initial_pattern(rules, &mut rng)?;
    let mut current_support = support_matcher.support(&current, d, false).count;
    let mut rows = Vec::new();

    for step in 0..params.n_steps {
        let mut outcomes = Vec::with_capacity(params.methods.len());
        for &method in &params.methods {
            let matcher = Matcher::new();
            let t0 = Instant::now();
            let out = explore(method, &current, d, f, &excl, rules, &matcher);
            let micros = t0.elapsed().as_micros();
            rows.push(BenchRow {
                step,
                method: method.name(),
                pattern_code: current.code().to_string(),
                iso_calls: matcher.calls(),
                micros,
            });
            outcomes.push((method, out));
        }
        for pair in outcomes.windows(2) {
            if pair[0].1.partition != pair[1].1.partition {
                return Err(BenchError::OracleViolation {
                    step,
                    a: pair[0].0.name(),
                    b: pair[1].0.name(),
                });
            }
        }
        let partition = &outcomes[0].1.partition;
        if partition.is_all_empty() {
            break; // isolated state: the trajectory cannot continue
        }

        let (y, q_xy) = propose(partition, &params.proposal, &mut rng)?;
        let y_out = explore(
            ExploreMethod::Een,
            &y,
            d,
            f,
            &excl,
            rules,
            &support_matcher,
        );
        let q_yx = proposal_mass(&y_out.partition, &params.proposal, current.code())
            .ok_or_else(|| SampleError::ReversibilityBroken {
                x: current.code().to_string(),
                y: y.code().to_string(),
            })?;
        let y_support = y_out
            .support_of_x
            .unwrap_or_else(|| support_matcher.support(&y, d, false).count);
        let alpha = accept_prob(
            params.score.apply(current_support),
            params.score.apply(y_support),
            q_xy,
            q_yx,
            &params.budget,
            &params.score,
        )?;
        if rng.gen::<f64>() < alpha {
            current = y;
            current_support = y_support;
        }
    }
    Ok(BenchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate::{gen_dense, DenseParams};

    #[test]
    fn methods_agree_and_calls_are_ordered() {
        let d = gen_dense(
            30,
            &DenseParams {
                avg_vertices: 6,
                avg_edges: 9,
                alphabet: 3,
            },
            5,
        )
        .unwrap();
        let rules = RuleSet::with_labels(5, &["0", "1", "2"]).unwrap();
        let params = BenchParams {
            methods: vec![
                ExploreMethod::Naive,
                ExploreMethod::Basic,
                ExploreMethod::Een,
            ],
            n_steps: 8,
            seed: 3,
            proposal: ProposalParams::default(),
            budget: PrivacyBudget::new(1.0, 0.0, 1).unwrap(),
            score: ScoreFunction::Linear,
        };
        let report = bench_neighbors(&d, 3, &rules, &params).unwrap();
        for step in 0..8 {
            let calls = |m: &str| {
                report
                    .rows
                    .iter()
                    .find(|r| r.step == step && r.method == m)
                    .map(|r| r.iso_calls)
            };
            let (n, b, e) = (calls("naive"), calls("basic"), calls("een"));
            if let (Some(n), Some(b), Some(e)) = (n, b, e) {
                assert!(e <= b, "step {step}: een {e} > basic {b}");
                assert!(b <= n, "step {step}: basic {b} > naive {n}");
            }
        }
        let csv = report.to_csv();
        assert!(csv.starts_with("step,method,iso_calls,micros\n"));
        assert!(report.to_per_call_csv().contains("een"));
    }

    #[test]
    fn identical_trajectory_regardless_of_method_list() {
        let d = gen_dense(
            20,
            &DenseParams {
                avg_vertices: 5,
                avg_edges: 7,
                alphabet: 2,
            },
            8,
        )
        .unwrap();
        let rules = RuleSet::with_labels(4, &["0", "1"]).unwrap();
        let base = BenchParams {
            methods: vec![ExploreMethod::Een],
            n_steps: 10,
            seed: 21,
            proposal: ProposalParams::default(),
            budget: PrivacyBudget::new(1.0, 0.0, 1).unwrap(),
            score: ScoreFunction::Linear,
        };
        let all = BenchParams {
            methods: vec![
                ExploreMethod::Naive,
                ExploreMethod::Basic,
                ExploreMethod::Een,
            ],
            ..base.clone()
        };
        let r1 = bench_neighbors(&d, 2, &rules, &base).unwrap();
        let r2 = bench_neighbors(&d, 2, &rules, &all).unwrap();
        let codes1: Vec<&str> = r1
            .rows
            .iter()
            .filter(|r| r.method == "een")
            .map(|r| r.pattern_code.as_str())
            .collect();
        let codes2: Vec<&str> = r2
            .rows
            .iter()
            .filter(|r| r.method == "een")
            .map(|r| r.pattern_code.as_str())
            .collect();
        assert_eq!(codes1, codes2);
    }
}
