//! Subgraph isomorphism: existence tests, full mapping enumeration, and
//! support counting over a dataset.
//!
//! Matching is non-induced: a mapping must preserve labels and pattern edges,
//! host edges between unmapped images are irrelevant. The matcher keeps a
//! monotone counter of per-host invocations so callers can assert how much
//! isomorphism work a strategy performed.

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::bitset::GidSet;
use crate::dataset::GraphDataset;
use crate::graph::LabeledGraph;
use crate::pattern::Pattern;

/// Assignment of pattern vertex `i` to host vertex `mapping[i]`.
pub type Mapping = Vec<u32>;

/// All mappings of a pattern into one host, possibly truncated at the cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingSet {
    pub maps: Vec<Mapping>,
    pub truncated: bool,
}

impl MappingSet {
    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// Exact support of a pattern: the id bitmap, its popcount, and optionally
/// the retained mappings per containing graph.
#[derive(Debug, Clone)]
pub struct SupportRecord {
    pub bitmap: GidSet,
    pub count: usize,
    pub mappings: Option<Vec<(usize, MappingSet)>>,
}

/// Candidate sets below this size are matched sequentially; larger fan out to
/// the rayon pool. The bitmap result is identical either way.
const PARALLEL_THRESHOLD: usize = 512;

#[derive(Debug)]
pub struct Matcher {
    calls: AtomicU64,
    mapping_cap: Option<usize>,
}

impl Default for Matcher {
    fn default() -> Self {
        Self::new()
    }
}

impl Matcher {
    pub fn new() -> Self {
        Self {
            calls: AtomicU64::new(0),
            mapping_cap: None,
        }
    }

    /// Matcher with a guardrail on mapping enumeration per host graph.
    pub fn with_cap(cap: Option<usize>) -> Self {
        Self {
            calls: AtomicU64::new(0),
            mapping_cap: cap,
        }
    }

    /// Total per-host matcher invocations so far.
    pub fn calls(&self) -> u64 {
        self.calls.load(AtomicOrdering::Relaxed)
    }

    fn bump(&self) {
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
    }

    /// True iff an edge-and-label-preserving injective mapping of `p` into
    /// `host` exists.
    pub fn is_subgraph(&self, p: &Pattern, host: &LabeledGraph) -> bool {
        self.bump();
        Embedder::new(p.graph(), host).exists()
    }

    /// Every mapping of `p` into `host`. Exhaustive unless a cap is set and
    /// tripped, which the `truncated` flag reports.
    pub fn enumerate_mappings(&self, p: &Pattern, host: &LabeledGraph) -> MappingSet {
        self.bump();
        Embedder::new(p.graph(), host).enumerate(self.mapping_cap)
    }

    /// Exact support over the dataset, prefiltered through the edge index.
    pub fn support(&self, p: &Pattern, d: &GraphDataset, keep_mappings: bool) -> SupportRecord {
        let candidates = d.candidate_gids(p);
        self.support_over(p, d, &candidates, keep_mappings)
    }

    /// Exact support restricted to the given candidate ids. The candidate set
    /// must be a superset of the true id set for the result to be exact.
    pub fn support_over(
        &self,
        p: &Pattern,
        d: &GraphDataset,
        candidates: &GidSet,
        keep_mappings: bool,
    ) -> SupportRecord {
        let ids = candidates.to_vec();
        let verdicts: Vec<(usize, Option<MappingSet>)> = if ids.len() >= PARALLEL_THRESHOLD {
            ids.par_iter()
                .map(|&gid| (gid, self.probe(p, d.graph(gid), keep_mappings)))
                .collect()
        } else {
            ids.iter()
                .map(|&gid| (gid, self.probe(p, d.graph(gid), keep_mappings)))
                .collect()
        };
        let mut bitmap = GidSet::empty(d.len());
        let mut mappings = keep_mappings.then(Vec::new);
        for (gid, found) in verdicts {
            if let Some(ms) = found {
                bitmap.insert(gid);
                if let Some(list) = mappings.as_mut() {
                    list.push((gid, ms));
                }
            }
        }
        let count = bitmap.count();
        SupportRecord {
            bitmap,
            count,
            mappings,
        }
    }

    /// Exact support with one invocation per dataset graph and no index
    /// prefilter; the baseline strategies are defined against this cost.
    pub fn support_full_scan(&self, p: &Pattern, d: &GraphDataset) -> SupportRecord {
        let all = GidSet::full(d.len());
        self.support_over(p, d, &all, false)
    }

    fn probe(&self, p: &Pattern, host: &LabeledGraph, keep: bool) -> Option<MappingSet> {
        if keep {
            self.bump();
            let ms = Embedder::new(p.graph(), host).enumerate(self.mapping_cap);
            (!ms.is_empty()).then_some(ms)
        } else {
            self.bump();
            Embedder::new(p.graph(), host)
                .exists()
                .then(|| MappingSet {
                    maps: Vec::new(),
                    truncated: false,
                })
        }
    }
}

/// One pattern-into-host search. Pattern vertices are matched in a connected
/// order; candidates are intersected host-adjacency bitsets filtered by label
/// and degree.
struct Embedder<'a> {
    p: &'a LabeledGraph,
    h: &'a LabeledGraph,
    order: Vec<u32>,
    /// for each step, the already-placed pattern neighbors of `order[step]`
    placed_nbrs: Vec<Vec<usize>>,
    /// per pattern vertex: bitset of label/degree-compatible host vertices
    compat: Vec<Vec<u64>>,
    words: usize,
}

impl<'a> Embedder<'a> {
    fn new(p: &'a LabeledGraph, h: &'a LabeledGraph) -> Self {
        let np = p.vertex_count();
        let words = h.vertex_count().div_ceil(64);

        let mut order: Vec<u32> = Vec::with_capacity(np);
        let mut picked = vec![false; np];
        // start from the highest-degree vertex, then grow connectedly,
        // preferring vertices with the most placed neighbors
        let start = (0..np as u32)
            .max_by_key(|&v| (p.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        order.push(start);
        picked[start as usize] = true;
        while order.len() < np {
            let next = (0..np as u32)
                .filter(|&v| !picked[v as usize])
                .max_by_key(|&v| {
                    let placed = p
                        .neighbors(v)
                        .iter()
                        .filter(|&&w| picked[w as usize])
                        .count();
                    (placed, p.degree(v), std::cmp::Reverse(v))
                })
                .unwrap();
            order.push(next);
            picked[next as usize] = true;
        }

        let pos_of: Vec<usize> = {
            let mut pos = vec![0; np];
            for (i, &v) in order.iter().enumerate() {
                pos[v as usize] = i;
            }
            pos
        };
        let placed_nbrs: Vec<Vec<usize>> = order
            .iter()
            .enumerate()
            .map(|(step, &v)| {
                p.neighbors(v)
                    .iter()
                    .filter(|&&w| pos_of[w as usize] < step)
                    .map(|&w| w as usize)
                    .collect()
            })
            .collect();

        let nh = h.vertex_count();
        let compat: Vec<Vec<u64>> = (0..np as u32)
            .map(|u| {
                let mut bits = vec![0u64; words];
                for w in 0..nh as u32 {
                    if h.label(w) == p.label(u) && h.degree(w) >= p.degree(u) {
                        bits[(w / 64) as usize] |= 1 << (w % 64);
                    }
                }
                bits
            })
            .collect();

        Self {
            p,
            h,
            order,
            placed_nbrs,
            compat,
            words,
        }
    }

    fn candidates(&self, step: usize, assignment: &[u32], used: &[u64], out: &mut Vec<u64>) {
        let v = self.order[step];
        out.copy_from_slice(&self.compat[v as usize]);
        for &q in &self.placed_nbrs[step] {
            let img = assignment[q];
            for (o, a) in out.iter_mut().zip(self.h.adj_row(img)) {
                *o &= a;
            }
        }
        for (o, u) in out.iter_mut().zip(used) {
            *o &= !u;
        }
    }

    fn exists(&self) -> bool {
        let mut assignment = vec![u32::MAX; self.p.vertex_count()];
        let mut used = vec![0u64; self.words];
        // stop at the first complete mapping; an aborted walk means one exists
        self.walk(0, &mut assignment, &mut used, &mut |_| true)
    }

    fn enumerate(&self, cap: Option<usize>) -> MappingSet {
        let mut maps = Vec::new();
        let mut truncated = false;
        let mut assignment = vec![u32::MAX; self.p.vertex_count()];
        let mut used = vec![0u64; self.words];
        self.walk(0, &mut assignment, &mut used, &mut |m: &[u32]| {
            maps.push(m.to_vec());
            if cap.is_some_and(|c| maps.len() >= c) {
                truncated = true;
                return true; // stop the search
            }
            false
        });
        MappingSet { maps, truncated }
    }

    /// Depth-first match; `sink` sees each complete mapping and returns true
    /// to abort the search.
    fn walk(
        &self,
        step: usize,
        assignment: &mut [u32],
        used: &mut [u64],
        sink: &mut impl FnMut(&[u32]) -> bool,
    ) -> bool {
        if step == self.order.len() {
            return sink(assignment);
        }
        let mut cand = vec![0u64; self.words];
        self.candidates(step, assignment, used, &mut cand);
        let v = self.order[step] as usize;
        for (wi, mut word) in cand.iter().copied().enumerate() {
            while word != 0 {
                let tz = word.trailing_zeros() as usize;
                word &= word - 1;
                let hv = (wi * 64 + tz) as u32;
                assignment[v] = hv;
                used[wi] |= 1 << tz;
                let stop = self.walk(step + 1, assignment, used, sink);
                used[wi] &= !(1 << tz);
                assignment[v] = u32::MAX;
                if stop {
                    return true;
                }
            }
        }
        false
    }
}
