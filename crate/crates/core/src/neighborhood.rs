//! Pattern-space neighborhoods: single-edge extensions and removals,
//! exclusion splicing for already-output patterns, and the three strategies
//! that classify every neighbor as frequent or infrequent.
//!
//! The strategies agree on the resulting partition and differ only in how
//! many matcher invocations they spend:
//! - `naive`: every neighbor is tested against every dataset graph.
//! - `basic`: the frequentness of the current pattern decides one side of the
//!   neighborhood for free (sub-neighbors of a frequent pattern are frequent,
//!   super-neighbors of an infrequent one are infrequent).
//! - `een`: reuses the mappings of the current pattern into each containing
//!   graph, so super-neighbors are classified by probing single-edge
//!   extensions of those mappings instead of running fresh isomorphism tests.

use std::collections::{BTreeMap, BTreeSet};

use crate::bitset::GidSet;
use crate::dataset::GraphDataset;
use crate::graph::RuleSet;
use crate::iso::Matcher;
use crate::pattern::Pattern;

/// Canonical codes of patterns removed from the output space. Grows
/// monotonically over one top-k run and never contains the walk's current
/// pattern.
#[derive(Debug, Clone, Default)]
pub struct ExclusionSet {
    codes: BTreeSet<String>,
}

impl ExclusionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, code: String) {
        self.codes.insert(code);
    }

    pub fn contains(&self, code: &str) -> bool {
        self.codes.contains(code)
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.codes.iter().map(|s| s.as_str())
    }
}

/// A super-backward neighbor together with the witness back edge `(u, v)` in
/// the base pattern's vertex numbering.
#[derive(Debug, Clone)]
pub struct SuperBack {
    pub pattern: Pattern,
    pub edge: (u32, u32),
}

/// A super-forward neighbor: new vertex labeled `label` attached to `anchor`.
#[derive(Debug, Clone)]
pub struct SuperFwd {
    pub pattern: Pattern,
    pub anchor: u32,
    pub label: String,
}

/// The raw rule-respecting neighborhood of a pattern, deduplicated by
/// canonical code within each kind.
#[derive(Debug, Clone, Default)]
pub struct RawNeighbors {
    pub sub: Vec<Pattern>,
    pub super_back: Vec<SuperBack>,
    pub super_fwd: Vec<SuperFwd>,
}

impl RawNeighbors {
    pub fn total(&self) -> usize {
        self.sub.len() + self.super_back.len() + self.super_fwd.len()
    }
}

/// Generates the neighborhood of `x` under the rule set.
///
/// Sub-neighbors drop one edge: either a back edge whose removal keeps the
/// pattern connected, or a forward edge whose removal isolates exactly one
/// vertex, which is dropped with it. Super-backward neighbors connect two
/// existing non-adjacent vertices; super-forward neighbors attach a fresh
/// vertex with a label from the alphabet. All kinds respect `v_max`/`e_max`
/// and are collapsed to isomorphism classes.
pub fn generate_neighbors(x: &Pattern, rules: &RuleSet) -> RawNeighbors {
    let g = x.graph();
    let mut sub: BTreeMap<String, Pattern> = BTreeMap::new();
    if g.edge_count() >= 2 {
        for &(u, v) in g.edges() {
            let du = g.degree(u);
            let dv = g.degree(v);
            let candidate = if du == 1 {
                // forward-edge removal: the isolated endpoint goes too
                g.without_vertex(u).ok()
            } else if dv == 1 {
                g.without_vertex(v).ok()
            } else {
                let h = g.without_edge(u, v).expect("edge exists");
                h.is_connected().then_some(h)
            };
            if let Some(h) = candidate {
                if rules.permits_state(&h) {
                    let p = Pattern::from_graph(&h).expect("sub-neighbor is connected");
                    sub.entry(p.code().to_string()).or_insert(p);
                }
            }
        }
    }

    let mut super_back: BTreeMap<String, SuperBack> = BTreeMap::new();
    let n = g.vertex_count() as u32;
    for u in 0..n {
        for v in (u + 1)..n {
            if g.has_edge(u, v) {
                continue;
            }
            let h = g.with_edge(u, v).expect("non-adjacent pair");
            if rules.permits_state(&h) {
                let p = Pattern::from_graph(&h).expect("still connected");
                super_back
                    .entry(p.code().to_string())
                    .or_insert(SuperBack {
                        pattern: p,
                        edge: (u, v),
                    });
            }
        }
    }

    let mut super_fwd: BTreeMap<String, SuperFwd> = BTreeMap::new();
    for u in 0..n {
        for label in &rules.labels {
            let h = g.with_attached_vertex(u, label).expect("fresh vertex");
            if rules.permits_state(&h) {
                let p = Pattern::from_graph(&h).expect("still connected");
                super_fwd
                    .entry(p.code().to_string())
                    .or_insert(SuperFwd {
                        pattern: p,
                        anchor: u,
                        label: label.clone(),
                    });
            }
        }
    }

    RawNeighbors {
        sub: sub.into_values().collect(),
        super_back: super_back.into_values().collect(),
        super_fwd: super_fwd.into_values().collect(),
    }
}

/// The neighborhood after exclusion splicing: surviving raw neighbors keep
/// their extension witnesses, replacements pulled in through excluded
/// patterns arrive as plain patterns.
#[derive(Debug, Clone, Default)]
pub struct SplicedNeighborhood {
    pub sub: Vec<Pattern>,
    pub super_back: Vec<SuperBack>,
    pub super_fwd: Vec<SuperFwd>,
    pub extra: Vec<Pattern>,
}

impl SplicedNeighborhood {
    pub fn total(&self) -> usize {
        self.sub.len() + self.super_back.len() + self.super_fwd.len() + self.extra.len()
    }

    /// Every member as a plain pattern list.
    pub fn all_patterns(&self) -> Vec<Pattern> {
        let mut out: Vec<Pattern> = Vec::with_capacity(self.total());
        out.extend(self.sub.iter().cloned());
        out.extend(self.super_back.iter().map(|b| b.pattern.clone()));
        out.extend(self.super_fwd.iter().map(|f| f.pattern.clone()));
        out.extend(self.extra.iter().cloned());
        out
    }

    pub fn contains_code(&self, code: &str) -> bool {
        self.sub.iter().any(|p| p.code() == code)
            || self.super_back.iter().any(|b| b.pattern.code() == code)
            || self.super_fwd.iter().any(|f| f.pattern.code() == code)
            || self.extra.iter().any(|p| p.code() == code)
    }
}

/// Replaces each excluded neighbor by that pattern's own neighbors,
/// transitively, so the walk space stays connected after patterns are removed
/// from it. The current pattern never appears in the result.
pub fn splice_exclusions(
    raw: RawNeighbors,
    x: &Pattern,
    excl: &ExclusionSet,
    rules: &RuleSet,
) -> SplicedNeighborhood {
    let mut out = SplicedNeighborhood::default();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut queue: Vec<Pattern> = Vec::new();

    for p in raw.sub {
        if excl.contains(p.code()) {
            queue.push(p);
        } else if seen.insert(p.code().to_string()) {
            out.sub.push(p);
        }
    }
    for b in raw.super_back {
        if excl.contains(b.pattern.code()) {
            queue.push(b.pattern);
        } else if seen.insert(b.pattern.code().to_string()) {
            out.super_back.push(b);
        }
    }
    for fwd in raw.super_fwd {
        if excl.contains(fwd.pattern.code()) {
            queue.push(fwd.pattern);
        } else if seen.insert(fwd.pattern.code().to_string()) {
            out.super_fwd.push(fwd);
        }
    }

    let mut expanded: BTreeSet<String> = BTreeSet::new();
    while let Some(g) = queue.pop() {
        if !expanded.insert(g.code().to_string()) {
            continue;
        }
        let nbrs = generate_neighbors(&g, rules);
        for p in nbrs
            .sub
            .into_iter()
            .chain(nbrs.super_back.into_iter().map(|b| b.pattern))
            .chain(nbrs.super_fwd.into_iter().map(|f| f.pattern))
        {
            if p.code() == x.code() {
                continue;
            }
            if excl.contains(p.code()) {
                queue.push(p);
            } else if seen.insert(p.code().to_string()) {
                out.extra.push(p);
            }
        }
    }
    out.extra.sort();
    out
}

/// Which bucket of the proposal distribution a neighbor falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bucket {
    FreqSub,
    FreqSuper,
    Infreq,
}

/// The classified neighborhood: frequent sub-neighbors, frequent
/// super-neighbors, and everything infrequent. The three sets are disjoint
/// and jointly cover the spliced neighborhood.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NeighborPartition {
    pub n1_sub: Vec<Pattern>,
    pub n1_super: Vec<Pattern>,
    pub n2: Vec<Pattern>,
}

impl NeighborPartition {
    pub fn total(&self) -> usize {
        self.n1_sub.len() + self.n1_super.len() + self.n2.len()
    }

    pub fn frequent_total(&self) -> usize {
        self.n1_sub.len() + self.n1_super.len()
    }

    pub fn is_all_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn locate(&self, code: &str) -> Option<Bucket> {
        if self.n1_sub.iter().any(|p| p.code() == code) {
            Some(Bucket::FreqSub)
        } else if self.n1_super.iter().any(|p| p.code() == code) {
            Some(Bucket::FreqSuper)
        } else if self.n2.iter().any(|p| p.code() == code) {
            Some(Bucket::Infreq)
        } else {
            None
        }
    }

    fn place(&mut self, y: Pattern, frequent: bool, x_edges: usize) {
        if !frequent {
            self.n2.push(y);
        } else if y.edge_count() < x_edges {
            self.n1_sub.push(y);
        } else {
            self.n1_super.push(y);
        }
    }

    fn finish(mut self) -> Self {
        self.n1_sub.sort();
        self.n1_super.sort();
        self.n2.sort();
        self
    }
}

/// Result of a neighborhood exploration. `support_of_x` is reported when the
/// strategy computed the current pattern's exact support along the way.
#[derive(Debug, Clone)]
pub struct ExploreOutcome {
    pub partition: NeighborPartition,
    pub support_of_x: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExploreMethod {
    Naive,
    Basic,
    Een,
}

impl ExploreMethod {
    pub fn name(self) -> &'static str {
        match self {
            ExploreMethod::Naive => "naive",
            ExploreMethod::Basic => "basic",
            ExploreMethod::Een => "een",
        }
    }
}

pub fn explore(
    method: ExploreMethod,
    x: &Pattern,
    d: &GraphDataset,
    f: usize,
    excl: &ExclusionSet,
    rules: &RuleSet,
    matcher: &Matcher,
) -> ExploreOutcome {
    match method {
        ExploreMethod::Naive => naive_explore(x, d, f, excl, rules, matcher),
        ExploreMethod::Basic => basic_explore(x, d, f, excl, rules, matcher),
        ExploreMethod::Een => een_explore(x, d, f, excl, rules, matcher),
    }
}

/// Tests every neighbor against every dataset graph. The reference strategy:
/// exactly `|neighborhood| * |dataset|` matcher invocations.
pub fn naive_explore(
    x: &Pattern,
    d: &GraphDataset,
    f: usize,
    excl: &ExclusionSet,
    rules: &RuleSet,
    matcher: &Matcher,
) -> ExploreOutcome {
    let spliced = splice_exclusions(generate_neighbors(x, rules), x, excl, rules);
    let mut partition = NeighborPartition::default();
    for y in spliced.all_patterns() {
        let rec = matcher.support_full_scan(&y, d);
        partition.place(y, rec.count >= f, x.edge_count());
    }
    ExploreOutcome {
        partition: partition.finish(),
        support_of_x: None,
    }
}

/// Uses the monotonic property: sub-neighbors of a frequent pattern are
/// frequent, super-neighbors of an infrequent pattern are infrequent. The
/// rest are tested with full scans.
pub fn basic_explore(
    x: &Pattern,
    d: &GraphDataset,
    f: usize,
    excl: &ExclusionSet,
    rules: &RuleSet,
    matcher: &Matcher,
) -> ExploreOutcome {
    let spliced = splice_exclusions(generate_neighbors(x, rules), x, excl, rules);
    let n_sub = spliced.sub.len();
    let n_super = spliced.super_back.len() + spliced.super_fwd.len();

    // Single-edge supports come straight from the edge index. Otherwise a
    // scan for the current pattern's support only pays off when it can free
    // both a sub- and a super-side verdict.
    let support_of_x: Option<usize> = if x.is_single_edge() {
        let (a, b) = x.graph().edge_label_pair(0, 1);
        Some(d.edge_bitmap(&a, &b).map_or(0, |s| s.count()))
    } else if n_sub >= 1 && n_super >= 1 {
        Some(matcher.support_full_scan(x, d).count)
    } else {
        None
    };
    let status = support_of_x.map(|s| s >= f);

    let mut partition = NeighborPartition::default();
    for y in spliced.sub {
        let frequent = match status {
            Some(true) => true,
            _ => matcher.support_full_scan(&y, d).count >= f,
        };
        partition.place(y, frequent, x.edge_count());
    }
    for y in spliced
        .super_back
        .into_iter()
        .map(|b| b.pattern)
        .chain(spliced.super_fwd.into_iter().map(|fw| fw.pattern))
    {
        let frequent = match status {
            Some(false) => false,
            _ => matcher.support_full_scan(&y, d).count >= f,
        };
        partition.place(y, frequent, x.edge_count());
    }
    for y in spliced.extra {
        let rec = matcher.support_full_scan(&y, d);
        partition.place(y, rec.count >= f, x.edge_count());
    }
    ExploreOutcome {
        partition: partition.finish(),
        support_of_x,
    }
}

/// Frequentness of a sub-neighbor `xp` of a pattern with membership bitmap
/// `bx`: intersects the edge bitmaps of `xp`, then isomorphism-tests only the
/// graphs in that intersection not already known to contain the base pattern.
pub fn sub_is_freq(
    xp: &Pattern,
    bx: &GidSet,
    d: &GraphDataset,
    f: usize,
    matcher: &Matcher,
) -> bool {
    let base = bx.count();
    if base >= f {
        return true;
    }
    let mut cands = d.candidate_gids(xp);
    cands.subtract(bx);
    let mut remaining = cands.count();
    if base + remaining < f {
        return false;
    }
    let mut count = base;
    for gid in cands.iter() {
        if count >= f || count + remaining < f {
            break;
        }
        remaining -= 1;
        if matcher.is_subgraph(xp, d.graph(gid)) {
            count += 1;
        }
    }
    count >= f
}

/// Frequentness of an arbitrary pattern via the edge-index prefilter with
/// early exit once the verdict is decided.
fn classify_pattern(y: &Pattern, d: &GraphDataset, f: usize, matcher: &Matcher) -> bool {
    let cands = d.candidate_gids(y);
    let mut remaining = cands.count();
    if remaining < f {
        return false;
    }
    if y.is_single_edge() {
        return true; // the edge bitmap is exact for single edges
    }
    let mut count = 0usize;
    for gid in cands.iter() {
        if count >= f || count + remaining < f {
            break;
        }
        remaining -= 1;
        if matcher.is_subgraph(y, d.graph(gid)) {
            count += 1;
        }
    }
    count >= f
}

/// The mapping-reuse strategy. One pass computes the base pattern's bitmap
/// and (when super-neighbors exist) all of its mappings per containing graph;
/// super-neighbors are then classified by checking whether any mapping
/// extends across the added edge, with zero further matcher invocations.
pub fn een_explore(
    x: &Pattern,
    d: &GraphDataset,
    f: usize,
    excl: &ExclusionSet,
    rules: &RuleSet,
    matcher: &Matcher,
) -> ExploreOutcome {
    let spliced = splice_exclusions(generate_neighbors(x, rules), x, excl, rules);
    let n_super = spliced.super_back.len() + spliced.super_fwd.len();
    let x_edges = x.edge_count();
    let mut partition = NeighborPartition::default();

    if n_super == 0 && !x.is_single_edge() {
        // Nothing to reuse mappings for; classify each neighbor directly so
        // the work never exceeds the basic strategy's.
        for y in spliced.sub.into_iter().chain(spliced.extra) {
            let frequent = classify_pattern(&y, d, f, matcher);
            partition.place(y, frequent, x_edges);
        }
        return ExploreOutcome {
            partition: partition.finish(),
            support_of_x: None,
        };
    }

    // Membership bitmap of x, with mappings retained when super-neighbors
    // need them.
    let (bx, mappings) = if x.is_single_edge() {
        let (a, b) = x.graph().edge_label_pair(0, 1);
        let bits = d
            .edge_bitmap(&a, &b)
            .cloned()
            .unwrap_or_else(|| GidSet::empty(d.len()));
        if bits.count() >= f && n_super > 0 {
            let rec = matcher.support_over(x, d, &bits, true);
            (rec.bitmap, rec.mappings)
        } else {
            (bits, None)
        }
    } else {
        let cands = d.candidate_gids(x);
        let rec = matcher.support_over(x, d, &cands, n_super > 0);
        (rec.bitmap, rec.mappings)
    };
    let support_x = bx.count();
    let freq_x = support_x >= f;

    // Sub-neighbors: all frequent if x is, otherwise tested individually.
    for y in spliced.sub {
        let frequent = freq_x || sub_is_freq(&y, &bx, d, f, matcher);
        partition.place(y, frequent, x_edges);
    }

    // Super-neighbors: all infrequent if x is, otherwise count containing
    // graphs by probing retained mappings, stopping once a verdict is fixed.
    if !freq_x {
        for y in spliced
            .super_back
            .into_iter()
            .map(|b| b.pattern)
            .chain(spliced.super_fwd.into_iter().map(|fw| fw.pattern))
        {
            partition.place(y, false, x_edges);
        }
    } else {
        let maps = mappings.as_deref().unwrap_or(&[]);
        let total = maps.len();
        let mut back_hits = vec![0usize; spliced.super_back.len()];
        let mut fwd_hits = vec![0usize; spliced.super_fwd.len()];
        for (pos, (gid, ms)) in maps.iter().enumerate() {
            let remaining_incl = total - pos;
            let host = d.graph(*gid);
            for (bi, back) in spliced.super_back.iter().enumerate() {
                let h = back_hits[bi];
                if h >= f || h + remaining_incl < f {
                    continue;
                }
                let contained = if ms.truncated {
                    matcher.is_subgraph(&back.pattern, host)
                } else {
                    let (u, v) = back.edge;
                    ms.maps
                        .iter()
                        .any(|m| host.has_edge(m[u as usize], m[v as usize]))
                };
                if contained {
                    back_hits[bi] += 1;
                }
            }
            for (fi, fwd) in spliced.super_fwd.iter().enumerate() {
                let h = fwd_hits[fi];
                if h >= f || h + remaining_incl < f {
                    continue;
                }
                let contained = if ms.truncated {
                    matcher.is_subgraph(&fwd.pattern, host)
                } else {
                    ms.maps.iter().any(|m| {
                        let mu = m[fwd.anchor as usize];
                        host.neighbors(mu)
                            .iter()
                            .any(|&w| !m.contains(&w) && host.label(w) == fwd.label)
                    })
                };
                if contained {
                    fwd_hits[fi] += 1;
                }
            }
        }
        for (back, hits) in spliced.super_back.into_iter().zip(back_hits) {
            partition.place(back.pattern, hits >= f, x_edges);
        }
        for (fwd, hits) in spliced.super_fwd.into_iter().zip(fwd_hits) {
            partition.place(fwd.pattern, hits >= f, x_edges);
        }
    }

    for y in spliced.extra {
        let frequent = classify_pattern(&y, d, f, matcher);
        partition.place(y, frequent, x_edges);
    }

    ExploreOutcome {
        partition: partition.finish(),
        support_of_x: Some(support_x),
    }
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
    fn single_edge_neighborhood_two_labels() {
        let rules = RuleSet::with_labels(3, &["A", "B"]).unwrap();
        let x = pat(&["A", "B"], &[(0, 1)]);
        let n = generate_neighbors(&x, &rules);
        assert!(n.sub.is_empty());
        assert!(n.super_back.is_empty());
        assert_eq!(n.super_fwd.len(), 4);
        let codes: BTreeSet<String> = n
            .super_fwd
            .iter()
            .map(|f| f.pattern.code().to_string())
            .collect();
        let expect: BTreeSet<String> = [
            pat(&["A", "A", "B"], &[(0, 1), (1, 2)]),
            pat(&["B", "A", "B"], &[(0, 1), (1, 2)]),
            pat(&["A", "B", "A"], &[(0, 1), (1, 2)]),
            pat(&["A", "B", "B"], &[(0, 1), (1, 2)]),
        ]
        .iter()
        .map(|p| p.code().to_string())
        .collect();
        assert_eq!(codes, expect);
    }

    #[test]
    fn triangle_subs_are_paths() {
        let rules = RuleSet::with_labels(4, &["A", "B", "C"]).unwrap();
        let tri = pat(&["A", "B", "C"], &[(0, 1), (1, 2), (0, 2)]);
        let n = generate_neighbors(&tri, &rules);
        assert_eq!(n.sub.len(), 3);
        assert!(n
            .sub
            .iter()
            .all(|p| p.vertex_count() == 3 && p.edge_count() == 2));
    }

    #[test]
    fn path_super_back_is_triangle() {
        let rules = RuleSet::with_labels(3, &["A", "B", "C"]).unwrap();
        let path = pat(&["A", "B", "C"], &[(0, 1), (1, 2)]);
        let n = generate_neighbors(&path, &rules);
        assert_eq!(n.super_back.len(), 1);
        let tri = pat(&["A", "B", "C"], &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(n.super_back[0].pattern, tri);
    }

    #[test]
    fn rules_cap_growth() {
        let rules = RuleSet::new(2, 2, None, ["A".to_string()]).unwrap();
        let x = pat(&["A", "A"], &[(0, 1)]);
        let n = generate_neighbors(&x, &rules);
        assert_eq!(n.total(), 0); // v_max = 2 blocks forward growth
    }

    #[test]
    fn splice_identity_when_no_exclusions() {
        let rules = RuleSet::with_labels(3, &["A", "B"]).unwrap();
        let x = pat(&["A", "B"], &[(0, 1)]);
        let raw = generate_neighbors(&x, &rules);
        let total = raw.total();
        let s = splice_exclusions(raw, &x, &ExclusionSet::new(), &rules);
        assert_eq!(s.total(), total);
        assert!(s.extra.is_empty());
    }

    #[test]
    fn splice_replaces_excluded_neighbor() {
        let rules = RuleSet::new(2, 3, None, ["A".to_string()]).unwrap();
        // space: A-A edge, A-A-A path, triangle. path's neighbors: {edge, triangle}
        let edge = pat(&["A", "A"], &[(0, 1)]);
        let path = pat(&["A", "A", "A"], &[(0, 1), (1, 2)]);
        let tri = pat(&["A", "A", "A"], &[(0, 1), (1, 2), (0, 2)]);

        let mut excl = ExclusionSet::new();
        excl.insert(path.code().to_string());
        // from the edge, the only raw neighbor (the path) is excluded; its
        // neighbors are {edge, triangle}; the edge itself is skipped
        let s = splice_exclusions(generate_neighbors(&edge, &rules), &edge, &excl, &rules);
        assert_eq!(s.sub.len() + s.super_back.len() + s.super_fwd.len(), 0);
        assert_eq!(s.extra, vec![tri.clone()]);

        // chain of two adjacent exclusions: path and triangle both excluded
        // leaves nothing reachable
        excl.insert(tri.code().to_string());
        let s = splice_exclusions(generate_neighbors(&edge, &rules), &edge, &excl, &rules);
        assert_eq!(s.total(), 0);
    }

    fn fixture() -> GraphDataset {
        // three graphs over {A, C, D}; support(A-D) = 3, support(A-A-D) = 2
        let text = "t # 0\nv 0 A\nv 1 A\nv 2 D\nv 3 C\ne 0 1\ne 1 2\ne 1 3\n\
                    t # 1\nv 0 A\nv 1 A\nv 2 D\ne 0 1\ne 0 2\ne 1 2\n\
                    t # 2\nv 0 A\nv 1 D\nv 2 C\ne 0 1\ne 1 2\n";
        parse_dataset(text).unwrap()
    }

    #[test]
    fn sub_is_freq_short_circuits() {
        let d = fixture();
        let m = Matcher::new();
        let ad = pat(&["A", "D"], &[(0, 1)]);
        let aad = pat(&["A", "A", "D"], &[(0, 1), (1, 2)]);
        let bx = m.support(&aad, &d, false).bitmap;

        // |B_x| >= f: no matcher work
        let before = m.calls();
        assert!(sub_is_freq(&ad, &bx, &d, 2, &m));
        assert_eq!(m.calls(), before);

        // f = 3 forces one probe of the graph outside B_x
        let before = m.calls();
        assert!(sub_is_freq(&ad, &bx, &d, 3, &m));
        assert_eq!(m.calls() - before, 1);
    }

    #[test]
    fn strategies_agree_on_fixture() {
        let d = fixture();
        let rules = RuleSet::with_labels(4, &["A", "C", "D"]).unwrap();
        let excl = ExclusionSet::new();
        let x = pat(&["A", "A", "D"], &[(0, 1), (1, 2)]);
        for f in [1, 2, 3] {
            let m1 = Matcher::new();
            let m2 = Matcher::new();
            let m3 = Matcher::new();
            let naive = naive_explore(&x, &d, f, &excl, &rules, &m1);
            let basic = basic_explore(&x, &d, f, &excl, &rules, &m2);
            let een = een_explore(&x, &d, f, &excl, &rules, &m3);
            assert_eq!(naive.partition, basic.partition, "f={f}");
            assert_eq!(naive.partition, een.partition, "f={f}");
            assert!(m3.calls() <= m2.calls(), "f={f}");
            assert!(m2.calls() <= m1.calls(), "f={f}");
        }
    }

    #[test]
    fn infrequent_base_costs_nothing_for_supers() {
        let d = fixture();
        let rules = RuleSet::with_labels(4, &["A", "C", "D"]).unwrap();
        let excl = ExclusionSet::new();
        // support(A-A-D) = 2 < f = 3: every super-neighbor must be infrequent
        let x = pat(&["A", "A", "D"], &[(0, 1), (1, 2)]);
        let m = Matcher::new();
        let out = een_explore(&x, &d, 3, &excl, &rules, &m);
        assert!(out.partition.n1_super.is_empty());
        let raw = generate_neighbors(&x, &rules);
        let n_super = raw.super_back.len() + raw.super_fwd.len();
        assert!(n_super > 0);
        assert!(
            out.partition
                .n2
                .iter()
                .filter(|p| p.edge_count() > x.edge_count())
                .count()
                >= n_super
        );
    }

    #[test]
    fn frequent_base_frees_all_subs() {
        let d = fixture();
        let rules = RuleSet::with_labels(4, &["A", "C", "D"]).unwrap();
        let excl = ExclusionSet::new();
        let x = pat(&["A", "A", "D"], &[(0, 1), (1, 2)]);
        let m = Matcher::new();
        let out = een_explore(&x, &d, 2, &excl, &rules, &m);
        // x is frequent at f=2, so both sub-neighbors are frequent
        assert_eq!(out.support_of_x, Some(2));
        assert_eq!(out.partition.n1_sub.len(), 2);
    }
}
