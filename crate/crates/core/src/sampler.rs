//! The private mining walk: proposal distribution, acceptance ratio,
//! convergence-gated sampling, and the sequential top-k driver.
//!
//! Each of the k rounds runs one Metropolis-Hastings chain over the pattern
//! space whose stationary distribution weights a pattern by
//! `exp(eps1 * u(x) / (2 k delta_u))`. A round ends when the Geweke
//! diagnostics declare convergence (or an iteration cap trips, which is
//! surfaced, not hidden); the final state is the round's sample and is
//! excluded from the space for subsequent rounds.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::GraphDataset;
use crate::diagnostics::{converged, ConvergencePolicy, MetricName, MetricTrace};
use crate::graph::RuleSet;
use crate::iso::Matcher;
use crate::neighborhood::{een_explore, Bucket, ExclusionSet, NeighborPartition};
use crate::pattern::Pattern;
use crate::privacy::perturb_supports;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SampleError {
    #[error("walk is stuck: current pattern has no neighbors")]
    WalkStuck,
    #[error("reversibility broken: {x} not reachable from proposed {y}")]
    ReversibilityBroken { x: String, y: String },
    #[error("output space exhausted after {rounds_done} of {requested} rounds")]
    SpaceExhausted {
        rounds_done: usize,
        requested: usize,
    },
    #[error("invalid parameter: {0}")]
    BadParams(String),
    #[error("sampling requires v_min <= 2, got {0}")]
    VMinTooHigh(usize),
}

/// Utility score of a pattern given its support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "f")]
pub enum ScoreFunction {
    /// `u(x) = support(x)`
    Linear,
    /// `u(x) = min(support(x), f)`: all frequent patterns score alike.
    Plateau(usize),
}

impl ScoreFunction {
    pub fn apply(&self, support: usize) -> f64 {
        match *self {
            ScoreFunction::Linear => support as f64,
            ScoreFunction::Plateau(f) => support.min(f) as f64,
        }
    }

    /// Sensitivity of the score: one graph added or removed moves any support
    /// by at most 1, and the plateau clamp is 1-Lipschitz.
    pub fn delta_u(&self) -> f64 {
        1.0
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            ScoreFunction::Linear => "linear",
            ScoreFunction::Plateau(_) => "plateau",
        }
    }
}

/// Score of a pattern against a dataset.
pub fn score(x: &Pattern, d: &GraphDataset, sf: &ScoreFunction, matcher: &Matcher) -> f64 {
    sf.apply(matcher.support(x, d, false).count)
}

/// Proposal bias knobs: `eta` splits mass between frequent and infrequent
/// neighbors, `rho` splits the frequent mass between sub- and
/// super-neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProposalParams {
    pub eta: f64,
    pub rho: f64,
}

impl Default for ProposalParams {
    fn default() -> Self {
        Self { eta: 0.9, rho: 0.5 }
    }
}

impl ProposalParams {
    pub fn new(eta: f64, rho: f64) -> Result<Self, SampleError> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(SampleError::BadParams(format!(
                "eta must lie in (0, 1], got {eta}"
            )));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(SampleError::BadParams(format!(
                "rho must lie in [0, 1], got {rho}"
            )));
        }
        Ok(Self { eta, rho })
    }
}

/// The privacy budget split: `eps1` drives the k sampling rounds, `eps2` the
/// optional support perturbation. Total spend is `eps1 + eps2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    pub eps1: f64,
    pub eps2: f64,
    pub k: u32,
}

impl PrivacyBudget {
    pub fn new(eps1: f64, eps2: f64, k: u32) -> Result<Self, SampleError> {
        if !(eps1 > 0.0) {
            return Err(SampleError::BadParams(format!(
                "eps1 must be positive, got {eps1}"
            )));
        }
        if !(eps2 >= 0.0) {
            return Err(SampleError::BadParams(format!(
                "eps2 must be non-negative, got {eps2}"
            )));
        }
        Ok(Self { eps1, eps2, k })
    }

    pub fn total(&self) -> f64 {
        self.eps1 + self.eps2
    }

    /// The per-sample exponent coefficient `eps1 / (2 k delta_u)`.
    pub fn exponent_coeff(&self, delta_u: f64) -> f64 {
        self.eps1 / (2.0 * self.k as f64 * delta_u)
    }
}

/// Per-step effective `(eta, rho)` after redistributing the mass of empty
/// neighbor sets, or `None` when the whole neighborhood is empty.
pub fn effective_params(
    partition: &NeighborPartition,
    pp: &ProposalParams,
) -> Option<(f64, f64)> {
    let (s, p, i) = (
        partition.n1_sub.len(),
        partition.n1_super.len(),
        partition.n2.len(),
    );
    if s + p + i == 0 {
        return None;
    }
    let mut eta = pp.eta;
    let mut rho = pp.rho;
    if i == 0 {
        eta = 1.0;
    }
    if s == 0 && p == 0 {
        eta = 0.0;
    }
    if s == 0 {
        rho = 0.0;
    }
    if p == 0 {
        rho = 1.0;
    }
    Some((eta, rho))
}

/// Proposal mass `q(x, y)` of one member of the partition, or `None` if the
/// code is not in the neighborhood.
pub fn proposal_mass(
    partition: &NeighborPartition,
    pp: &ProposalParams,
    code: &str,
) -> Option<f64> {
    let (eta, rho) = effective_params(partition, pp)?;
    let bucket = partition.locate(code)?;
    Some(match bucket {
        Bucket::FreqSub => rho * eta / partition.n1_sub.len() as f64,
        Bucket::FreqSuper => (1.0 - rho) * eta / partition.n1_super.len() as f64,
        Bucket::Infreq => (1.0 - eta) / partition.n2.len() as f64,
    })
}

/// Draws a neighbor from the proposal distribution. Returns the proposed
/// pattern and its mass `q(x, y)`.
pub fn propose(
    partition: &NeighborPartition,
    pp: &ProposalParams,
    rng: &mut impl Rng,
) -> Result<(Pattern, f64), SampleError> {
    let (eta, rho) = effective_params(partition, pp).ok_or(SampleError::WalkStuck)?;
    let mass_sub = rho * eta;
    let mass_super = (1.0 - rho) * eta;
    let r: f64 = rng.gen();
    let (set, mass_total): (&[Pattern], f64) = if r < mass_sub {
        (&partition.n1_sub, mass_sub)
    } else if r < mass_sub + mass_super {
        (&partition.n1_super, mass_super)
    } else {
        (&partition.n2, 1.0 - eta)
    };
    debug_assert!(!set.is_empty(), "redistribution keeps chosen buckets non-empty");
    let idx = rng.gen_range(0..set.len());
    Ok((set[idx].clone(), mass_total / set.len() as f64))
}

/// Metropolis-Hastings acceptance probability
/// `min(exp(c (u_y - u_x)) * q_yx / q_xy, 1)` with `c = eps1 / (2 k delta_u)`.
/// Computed on the score difference, so shifting all scores by a constant
/// leaves it bit-identical.
pub fn accept_prob(
    u_x: f64,
    u_y: f64,
    q_xy: f64,
    q_yx: f64,
    budget: &PrivacyBudget,
    sf: &ScoreFunction,
) -> Result<f64, SampleError> {
    if !(q_xy > 0.0) {
        return Err(SampleError::BadParams(format!(
            "forward proposal mass must be positive, got {q_xy}"
        )));
    }
    if !(q_yx > 0.0) {
        return Err(SampleError::ReversibilityBroken {
            x: format!("q_yx={q_yx}"),
            y: "proposed pattern".to_string(),
        });
    }
    let c = budget.exponent_coeff(sf.delta_u());
    Ok(((c * (u_y - u_x)).exp() * q_yx / q_xy).min(1.0))
}

/// Uniformly random single-edge pattern over the unordered label pairs of the
/// alphabet. Data-independent by construction.
pub fn initial_pattern(rules: &RuleSet, rng: &mut impl Rng) -> Result<Pattern, SampleError> {
    if rules.v_min > 2 {
        return Err(SampleError::VMinTooHigh(rules.v_min));
    }
    let labels: Vec<&String> = rules.labels.iter().collect();
    let m = labels.len();
    let mut pairs = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in i..m {
            pairs.push((labels[i], labels[j]));
        }
    }
    let (a, b) = pairs[rng.gen_range(0..pairs.len())];
    Ok(Pattern::single_edge(a, b).expect("alphabet labels are valid"))
}

/// Caches classified neighborhoods per canonical code within one sampling
/// round, evicting the least recently used entry beyond the capacity. The
/// cache must be cleared whenever the exclusion set grows.
pub struct ExploreCache {
    map: HashMap<String, (Arc<(NeighborPartition, usize)>, u64)>,
    stamp: u64,
    cap: usize,
}

impl ExploreCache {
    pub fn new(cap: usize) -> Self {
        Self {
            map: HashMap::new(),
            stamp: 0,
            cap: cap.max(1),
        }
    }

    pub fn clear(&mut self) {
        self.map.clear();
    }

    fn get(&mut self, code: &str) -> Option<Arc<(NeighborPartition, usize)>> {
        self.stamp += 1;
        let stamp = self.stamp;
        self.map.get_mut(code).map(|(entry, s)| {
            *s = stamp;
            Arc::clone(entry)
        })
    }

    fn put(&mut self, code: String, value: Arc<(NeighborPartition, usize)>) {
        if self.map.len() >= self.cap {
            if let Some(oldest) = self
                .map
                .iter()
                .min_by_key(|(_, (_, s))| *s)
                .map(|(k, _)| k.clone())
            {
                self.map.remove(&oldest);
            }
        }
        self.stamp += 1;
        self.map.insert(code, (value, self.stamp));
    }
}

/// One Metropolis-Hastings chain over the pattern space. The chain owns no
/// randomness beyond the stream handed to each call, and is the only consumer
/// of that stream.
pub struct Walk<'a> {
    d: &'a GraphDataset,
    f: usize,
    budget: &'a PrivacyBudget,
    sf: &'a ScoreFunction,
    pp: &'a ProposalParams,
    rules: &'a RuleSet,
    excl: &'a ExclusionSet,
    matcher: &'a Matcher,
    cache: &'a mut ExploreCache,
    current: Pattern,
    support: usize,
    partition: Arc<(NeighborPartition, usize)>,
    traces: Vec<MetricTrace>,
    iteration: usize,
}

impl<'a> Walk<'a> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        d: &'a GraphDataset,
        f: usize,
        budget: &'a PrivacyBudget,
        sf: &'a ScoreFunction,
        pp: &'a ProposalParams,
        rules: &'a RuleSet,
        excl: &'a ExclusionSet,
        matcher: &'a Matcher,
        cache: &'a mut ExploreCache,
        start: Pattern,
    ) -> Self {
        let mut walk = Self {
            d,
            f,
            budget,
            sf,
            pp,
            rules,
            excl,
            matcher,
            cache,
            current: start,
            support: 0,
            partition: Arc::new((NeighborPartition::default(), 0)),
            traces: MetricName::ALL.map(MetricTrace::new).to_vec(),
            iteration: 0,
        };
        let entry = walk.explore_cached(&walk.current.clone());
        walk.support = entry.1;
        walk.partition = entry;
        walk
    }

    fn explore_cached(&mut self, x: &Pattern) -> Arc<(NeighborPartition, usize)> {
        if let Some(hit) = self.cache.get(x.code()) {
            return hit;
        }
        let out = een_explore(x, self.d, self.f, self.excl, self.rules, self.matcher);
        let support = out
            .support_of_x
            .unwrap_or_else(|| self.matcher.support(x, self.d, false).count);
        let entry = Arc::new((out.partition, support));
        self.cache.put(x.code().to_string(), Arc::clone(&entry));
        entry
    }

    pub fn current(&self) -> &Pattern {
        &self.current
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn partition(&self) -> &NeighborPartition {
        &self.partition.0
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn traces(&self) -> &[MetricTrace] {
        &self.traces
    }

    /// True when the current pattern has no neighbors at all: a one-state
    /// chain that can never move.
    pub fn is_isolated(&self) -> bool {
        self.partition.0.is_all_empty()
    }

    /// One MH transition: propose, compute the reverse mass from the
    /// proposal's own neighborhood, accept or stay, then append the
    /// diagnostic metrics of the resulting state.
    pub fn step(&mut self, rng: &mut impl Rng) -> Result<bool, SampleError> {
        let (y, q_xy) = propose(&self.partition.0, self.pp, rng)?;
        let y_entry = self.explore_cached(&y);
        let q_yx = proposal_mass(&y_entry.0, self.pp, self.current.code()).ok_or_else(|| {
            SampleError::ReversibilityBroken {
                x: self.current.code().to_string(),
                y: y.code().to_string(),
            }
        })?;
        let u_x = self.sf.apply(self.support);
        let u_y = self.sf.apply(y_entry.1);
        let alpha = accept_prob(u_x, u_y, q_xy, q_yx, self.budget, self.sf)?;
        let accepted = rng.gen::<f64>() < alpha;
        if accepted {
            self.support = y_entry.1;
            self.partition = y_entry;
            self.current = y;
        }
        self.iteration += 1;
        let part = &self.partition.0;
        let snapshot = [
            part.total() as f64,
            part.frequent_total() as f64,
            self.current.vertex_count() as f64,
        ];
        for (trace, v) in self.traces.iter_mut().zip(snapshot) {
            trace.values.push(v);
        }
        Ok(accepted)
    }
}

/// Outcome of one sampling round.
#[derive(Debug, Clone)]
pub struct RoundResult {
    pub pattern: Pattern,
    pub true_support: usize,
    pub noisy_support: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Per-iteration metric traces, retained only on request.
    pub traces: Option<Vec<MetricTrace>>,
}

/// Knobs beyond the paper-level parameters.
#[derive(Debug, Clone)]
pub struct WalkOptions {
    /// Hard per-chain iteration cap; `None` means `50 * window`.
    pub max_iterations: Option<usize>,
    /// Guardrail for mapping enumeration per host graph.
    pub mapping_cap: Option<usize>,
    /// Bound on cached neighborhoods per round.
    pub cache_cap: usize,
    /// Retain per-round metric traces in the results.
    pub keep_traces: bool,
}

impl Default for WalkOptions {
    fn default() -> Self {
        Self {
            max_iterations: None,
            mapping_cap: None,
            cache_cap: 8192,
            keep_traces: false,
        }
    }
}

fn resolve_max_iterations(opts: &WalkOptions, policy: &ConvergencePolicy) -> usize {
    opts.max_iterations.unwrap_or(50 * policy.window.max(1))
}

/// Picks a data-independent starting pattern that is not excluded: a uniform
/// label-pair edge, replaced by a uniform member of its spliced neighborhood
/// when the drawn edge has already been output. Falls back to the remaining
/// label pairs before giving up.
fn pick_start(
    rules: &RuleSet,
    excl: &ExclusionSet,
    rng: &mut impl Rng,
) -> Result<Option<Pattern>, SampleError> {
    let first = initial_pattern(rules, rng)?;
    let mut candidates = vec![first];
    // enqueue the other label pairs as deterministic fallbacks
    let labels: Vec<&String> = rules.labels.iter().collect();
    for i in 0..labels.len() {
        for j in i..labels.len() {
            let p = Pattern::single_edge(labels[i], labels[j]).expect("valid labels");
            if p != candidates[0] {
                candidates.push(p);
            }
        }
    }
    for cand in candidates {
        if !excl.contains(cand.code()) {
            return Ok(Some(cand));
        }
        let spliced = crate::neighborhood::splice_exclusions(
            crate::neighborhood::generate_neighbors(&cand, rules),
            &cand,
            excl,
            rules,
        );
        let pool = spliced.all_patterns();
        if !pool.is_empty() {
            return Ok(Some(pool[rng.gen_range(0..pool.len())].clone()));
        }
    }
    Ok(None)
}

/// Runs one chain to convergence (or the cap) and returns the sampled
/// pattern. A start whose neighborhood is empty is the only reachable state
/// and is returned immediately.
#[allow(clippy::too_many_arguments)]
pub fn sample_pattern(
    d: &GraphDataset,
    f: usize,
    budget: &PrivacyBudget,
    sf: &ScoreFunction,
    pp: &ProposalParams,
    policy: &ConvergencePolicy,
    rules: &RuleSet,
    excl: &ExclusionSet,
    matcher: &Matcher,
    cache: &mut ExploreCache,
    opts: &WalkOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Option<RoundResult>, SampleError> {
    let Some(start) = pick_start(rules, excl, rng)? else {
        return Ok(None);
    };
    let max_iter = resolve_max_iterations(opts, policy);
    let mut walk = Walk::new(d, f, budget, sf, pp, rules, excl, matcher, cache, start);
    if walk.is_isolated() {
        return Ok(Some(RoundResult {
            true_support: walk.support(),
            pattern: walk.current().clone(),
            noisy_support: None,
            iterations: 0,
            converged: true,
            traces: opts.keep_traces.then(|| walk.traces().to_vec()),
        }));
    }
    let mut certified = false;
    while walk.iteration() < max_iter {
        walk.step(rng)?;
        if converged(walk.traces(), policy) && rules.permits_output(walk.current().graph()) {
            certified = true;
            break;
        }
    }
    Ok(Some(RoundResult {
        true_support: walk.support(),
        pattern: walk.current().clone(),
        noisy_support: None,
        iterations: walk.iteration(),
        converged: certified,
        traces: opts.keep_traces.then(|| walk.traces().to_vec()),
    }))
}

/// The full private top-k miner: k sequential sampling rounds, each excluding
/// its output from the space, followed by optional Laplace perturbation of
/// the true supports when `eps2 > 0`.
#[allow(clippy::too_many_arguments)]
pub fn mine_topk(
    d: &GraphDataset,
    f: usize,
    budget: &PrivacyBudget,
    sf: &ScoreFunction,
    pp: &ProposalParams,
    policy: &ConvergencePolicy,
    rules: &RuleSet,
    seed: u64,
    opts: &WalkOptions,
) -> Result<Vec<RoundResult>, SampleError> {
    let k = budget.k as usize;
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matcher = Matcher::with_cap(opts.mapping_cap);
    let mut cache = ExploreCache::new(opts.cache_cap);
    let mut excl = ExclusionSet::new();
    let mut rounds: Vec<RoundResult> = Vec::with_capacity(k);

    for round in 0..k {
        cache.clear(); // the exclusion set grows between rounds
        let outcome = sample_pattern(
            d, f, budget, sf, pp, policy, rules, &excl, &matcher, &mut cache, opts, &mut rng,
        )?;
        let Some(result) = outcome else {
            return Err(SampleError::SpaceExhausted {
                rounds_done: round,
                requested: k,
            });
        };
        excl.insert(result.pattern.code().to_string());
        rounds.push(result);
    }

    if budget.eps2 > 0.0 {
        let records: Vec<(Pattern, usize)> = rounds
            .iter()
            .map(|r| (r.pattern.clone(), r.true_support))
            .collect();
        let noisy = perturb_supports(&records, budget.eps2, budget.k, &mut rng)
            .map_err(|e| SampleError::BadParams(e.to_string()))?;
        for (round, (_, ns)) in rounds.iter_mut().zip(noisy) {
            round.noisy_support = Some(ns);
        }
    }
    Ok(rounds)
}

/// The resolved configuration echoed into every result file; re-running with
/// these values reproduces the output byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MineConfig {
    pub input: Option<String>,
    pub eps1: f64,
    pub eps2: f64,
    pub k: u32,
    pub f: usize,
    /// True when `f` was derived by the exact miner on this input, which is
    /// not covered by the privacy budget.
    pub f_derived_nonprivate: bool,
    pub eta: f64,
    pub rho: f64,
    pub score: ScoreFunction,
    pub rules: RuleSet,
    pub seed: u64,
    pub convergence: ConvergencePolicy,
    pub max_iterations: usize,
    pub emit_true_supports: bool,
}

/// One output pattern in the result file. The optional fields are omitted
/// entirely when absent: no noisy support is emitted without `eps2` budget,
/// and exact supports appear only on explicit request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternReport {
    pub pattern: Pattern,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_support: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noisy_support: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Analytic utility bounds attached to the result file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UtilityBoundsReport {
    pub gamma: f64,
    pub m_upper: f64,
    pub beta_sampling: f64,
    pub beta_noise: Option<f64>,
}

/// The result-file schema for a mining run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MineReport {
    pub config: MineConfig,
    pub patterns: Vec<PatternReport>,
    pub utility_bounds: Option<UtilityBoundsReport>,
}

impl MineReport {
    /// Builds the report, withholding true supports unless explicitly asked
    /// for: they are exact values and not protected by the budget.
    pub fn new(
        config: MineConfig,
        rounds: Vec<RoundResult>,
        utility_bounds: Option<UtilityBoundsReport>,
    ) -> Self {
        let emit_true = config.emit_true_supports;
        let patterns = rounds
            .into_iter()
            .map(|r| PatternReport {
                pattern: r.pattern,
                true_support: emit_true.then_some(r.true_support),
                noisy_support: r.noisy_support,
                iterations: r.iterations,
                converged: r.converged,
            })
            .collect();
        Self {
            config,
            patterns,
            utility_bounds,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
