//! Exact, non-private mining: true top-k patterns, the support threshold they
//! imply, and full enumeration of small pattern spaces. This layer provides
//! the ground truth the private sampler is evaluated against.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::GraphDataset;
use crate::graph::RuleSet;
use crate::iso::Matcher;
use crate::neighborhood::generate_neighbors;
use crate::pattern::Pattern;
use crate::privacy::exp_mechanism_weights;
use crate::sampler::{PrivacyBudget, ScoreFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinerError {
    #[error("only {found} patterns exist under the rules with support >= 1, {requested} requested")]
    NotEnoughPatterns { found: usize, requested: usize },
    #[error("pattern space exceeds the enumeration guard of {limit} classes")]
    SpaceTooLarge { limit: usize },
}

/// Exact top-k patterns sorted by support descending, canonical code
/// ascending; `threshold_f` is the k-th pattern's support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningResult {
    pub patterns: Vec<(Pattern, usize)>,
    pub threshold_f: usize,
}

/// A candidate the miner skipped without counting, with the infrequent
/// sub-neighbor that justified the skip.
#[derive(Debug, Clone)]
pub struct PrunedCandidate {
    pub candidate: Pattern,
    pub witness: Pattern,
}

/// Level-wise exact top-k mining with threshold raising.
///
/// Level 1 supports come free from the edge index. Each further level grows
/// frequent-enough patterns by one edge, skips candidates with a sub-neighbor
/// already known to fall below the running threshold, and counts the rest
/// exactly. The running threshold is the support of the k-th best
/// output-eligible pattern found so far, so nothing that can still reach the
/// final top-k is ever skipped.
pub fn mine_exact_topk(
    d: &GraphDataset,
    k: usize,
    rules: &RuleSet,
    matcher: &Matcher,
) -> Result<MiningResult, MinerError> {
    mine_exact_topk_traced(d, k, rules, matcher, None)
}

/// Same as [`mine_exact_topk`] but records every pruned candidate with its
/// witness when a log is supplied.
pub fn mine_exact_topk_traced(
    d: &GraphDataset,
    k: usize,
    rules: &RuleSet,
    matcher: &Matcher,
    mut prune_log: Option<&mut Vec<PrunedCandidate>>,
) -> Result<MiningResult, MinerError> {
    assert!(k >= 1, "k must be at least 1");

    // code -> support for everything counted so far (any vertex count)
    let mut counted: BTreeMap<String, usize> = BTreeMap::new();
    // output-eligible patterns: respect v_min, support >= 1
    let mut pool: Vec<(Pattern, usize)> = Vec::new();

    let threshold = |pool: &mut Vec<(Pattern, usize)>| -> usize {
        if pool.len() < k {
            return 1;
        }
        pool.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        pool[k - 1].1
    };

    let mut level: Vec<(Pattern, usize)> = Vec::new();
    for ((a, b), bits) in d.edge_index() {
        let p = match Pattern::single_edge(a, b) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if !rules.permits_state(p.graph()) {
            continue;
        }
        let sup = bits.count();
        if sup >= 1 {
            level.push((p, sup));
        }
    }

    while !level.is_empty() {
        for (p, sup) in &level {
            counted.insert(p.code().to_string(), *sup);
            if rules.permits_output(p.graph()) {
                pool.push((p.clone(), *sup));
            }
        }
        let th = threshold(&mut pool);

        let mut cands: BTreeMap<String, Pattern> = BTreeMap::new();
        for (p, sup) in &level {
            if *sup < th {
                continue;
            }
            let raw = generate_neighbors(p, rules);
            for cand in raw
                .super_back
                .into_iter()
                .map(|b| b.pattern)
                .chain(raw.super_fwd.into_iter().map(|f| f.pattern))
            {
                if !counted.contains_key(cand.code()) {
                    cands.entry(cand.code().to_string()).or_insert(cand);
                }
            }
        }

        let mut next_level = Vec::new();
        'cand: for cand in cands.into_values() {
            for sub in generate_neighbors(&cand, rules).sub {
                let known = counted.get(sub.code());
                if known.is_none_or(|&s| s < th) {
                    if let Some(log) = prune_log.as_deref_mut() {
                        log.push(PrunedCandidate {
                            candidate: cand.clone(),
                            witness: sub,
                        });
                    }
                    continue 'cand;
                }
            }
            let sup = matcher.support(&cand, d, false).count;
            if sup >= 1 {
                next_level.push((cand, sup));
            } else {
                counted.insert(cand.code().to_string(), 0);
            }
        }
        level = next_level;
    }

    pool.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    pool.dedup_by(|a, b| a.0 == b.0);
    if pool.len() < k {
        return Err(MinerError::NotEnoughPatterns {
            found: pool.len(),
            requested: k,
        });
    }
    pool.truncate(k);
    let threshold_f = pool[k - 1].1;
    Ok(MiningResult {
        patterns: pool,
        threshold_f,
    })
}

/// On-disk ground-truth schema:
/// `{"k":int,"f":int,"patterns":[{"pattern":{...},"support":int}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruthFile {
    pub k: usize,
    pub f: usize,
    pub patterns: Vec<TruthPattern>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruthPattern {
    pub pattern: Pattern,
    pub support: usize,
}

impl TruthFile {
    pub fn from_result(result: &MiningResult, k: usize) -> Self {
        Self {
            k,
            f: result.threshold_f,
            patterns: result
                .patterns
                .iter()
                .map(|(p, s)| TruthPattern {
                    pattern: p.clone(),
                    support: *s,
                })
                .collect(),
        }
    }

    pub fn to_result(&self) -> MiningResult {
        MiningResult {
            patterns: self
                .patterns
                .iter()
                .map(|tp| (tp.pattern.clone(), tp.support))
                .collect(),
            threshold_f: self.f,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("truth serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Hard cap on enumerated pattern-space size.
pub const SPACE_GUARD: usize = 100_000;

/// Every connected pattern isomorphism class reachable under the rules,
/// enumerated breadth-first from the single-edge seeds. This is the walk's
/// state space; `v_min` does not restrict it.
pub fn enumerate_space(rules: &RuleSet) -> Result<Vec<Pattern>, MinerError> {
    let mut space: BTreeMap<String, Pattern> = BTreeMap::new();
    let mut queue: Vec<Pattern> = Vec::new();
    let labels: Vec<&String> = rules.labels.iter().collect();
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i..] {
            let p = Pattern::single_edge(a, b).expect("valid labels");
            if rules.permits_state(p.graph()) && !space.contains_key(p.code()) {
                space.insert(p.code().to_string(), p.clone());
                queue.push(p);
            }
        }
    }
    while let Some(p) = queue.pop() {
        let raw = generate_neighbors(&p, rules);
        for nb in raw
            .super_back
            .into_iter()
            .map(|b| b.pattern)
            .chain(raw.super_fwd.into_iter().map(|f| f.pattern))
        {
            if !space.contains_key(nb.code()) {
                space.insert(nb.code().to_string(), nb.clone());
                if space.len() > SPACE_GUARD {
                    return Err(MinerError::SpaceTooLarge { limit: SPACE_GUARD });
                }
                queue.push(nb);
            }
        }
    }
    Ok(space.into_values().collect())
}

/// Crude upper bound on the output-space size ignoring isomorphism: the
/// number of vertex-labeled graphs on up to `v_max` vertices. Infinite rule
/// sets make this astronomically loose, which is fine for a log-scale bound.
pub fn m_upper_crude(rules: &RuleSet) -> f64 {
    let l = rules.labels.len() as f64;
    let mut total = 0.0f64;
    for v in 2..=rules.v_max {
        let vf = v as f64;
        total += l.powf(vf) * 2f64.powf(vf * (vf - 1.0) / 2.0);
    }
    total
}

/// The exponential-mechanism target distribution over an enumerated space,
/// with exact supports. The oracle the sampler's stationary behavior is
/// checked against.
pub fn target_distribution(
    space: &[Pattern],
    d: &GraphDataset,
    budget: &PrivacyBudget,
    sf: &ScoreFunction,
    matcher: &Matcher,
) -> Vec<f64> {
    let scores: Vec<f64> = space
        .iter()
        .map(|p| sf.apply(matcher.support(p, d, false).count))
        .collect();
    exp_mechanism_weights(&scores, budget.eps1, budget.k, sf.delta_u())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::parse_dataset;
    use crate::graph::LabeledGraph;

    fn pat(labels: &[&str], edges: &[(u32, u32)]) -> Pattern {
        let g = LabeledGraph::new(
            labels.iter().map(|s| s.to_string()).collect(),
            edges.iter().copied(),
        )
        .unwrap();
        Pattern::from_graph(&g).unwrap()
    }

    #[test]
    fn three_identical_triangles() {
        let tri = "v 0 A\nv 1 B\nv 2 C\ne 0 1\ne 1 2\ne 0 2\n";
        let text = format!("t # 0\n{tri}t # 1\n{tri}t # 2\n{tri}");
        let d = parse_dataset(&text).unwrap();
        let rules = RuleSet::with_labels(3, &["A", "B", "C"]).unwrap();
        let m = Matcher::new();
        let res = mine_exact_topk(&d, 3, &rules, &m).unwrap();
        assert_eq!(res.threshold_f, 3);
        let expect = {
            let mut v = vec![
                pat(&["A", "B"], &[(0, 1)]),
                pat(&["A", "C"], &[(0, 1)]),
                pat(&["B", "C"], &[(0, 1)]),
            ];
            v.sort();
            v
        };
        let got: Vec<Pattern> = res.patterns.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(got, expect);
        assert!(res.patterns.iter().all(|&(_, s)| s == 3));
    }

    #[test]
    fn k_larger_than_universe_errors() {
        let d = parse_dataset("t # 0\nv 0 A\nv 1 A\ne 0 1\n").unwrap();
        let rules = RuleSet::new(2, 2, None, ["A".to_string()]).unwrap();
        let m = Matcher::new();
        let err = mine_exact_topk(&d, 5, &rules, &m).unwrap_err();
        assert_eq!(
            err,
            MinerError::NotEnoughPatterns {
                found: 1,
                requested: 5
            }
        );
    }

    #[test]
    fn enumerate_single_label_three_vertices() {
        let rules = RuleSet::new(2, 3, None, ["A".to_string()]).unwrap();
        let space = enumerate_space(&rules).unwrap();
        let mut expect = vec![
            pat(&["A", "A"], &[(0, 1)]),
            pat(&["A", "A", "A"], &[(0, 1), (1, 2)]),
            pat(&["A", "A", "A"], &[(0, 1), (1, 2), (0, 2)]),
        ];
        expect.sort();
        assert_eq!(space, expect);
    }

    #[test]
    fn enumerate_two_labels_two_vertices() {
        let rules = RuleSet::with_labels(2, &["A", "B"]).unwrap();
        let space = enumerate_space(&rules).unwrap();
        assert_eq!(space.len(), 3);
    }

    #[test]
    fn tiny_vmax_is_rejected_at_rule_construction() {
        assert!(RuleSet::new(1, 1, None, ["A".to_string()]).is_err());
    }

    #[test]
    fn space_closed_under_neighbors() {
        let rules = RuleSet::with_labels(4, &["A", "B"]).unwrap();
        let space = enumerate_space(&rules).unwrap();
        let codes: std::collections::BTreeSet<&str> =
            space.iter().map(|p| p.code()).collect();
        for p in &space {
            let raw = generate_neighbors(p, &rules);
            for nb in raw
                .sub
                .iter()
                .chain(raw.super_back.iter().map(|b| &b.pattern))
                .chain(raw.super_fwd.iter().map(|f| &f.pattern))
            {
                assert!(codes.contains(nb.code()), "{} escapes space", nb.code());
            }
        }
    }

    #[test]
    fn crude_bound_dominates_enumeration() {
        let rules = RuleSet::with_labels(4, &["A", "B"]).unwrap();
        let space = enumerate_space(&rules).unwrap();
        assert!(m_upper_crude(&rules) >= space.len() as f64);
    }
}
