//! Undirected, node-labeled simple graphs and the rule set that bounds the
//! pattern space.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("edge endpoint {0} out of range (graph has {1} vertices)")]
    BadEndpoint(u32, usize),
    #[error("empty label")]
    EmptyLabel,
    #[error("label {0:?} contains characters outside [A-Za-z0-9_]")]
    BadLabel(String),
}

/// Checks a label token against the `[A-Za-z0-9_]+` alphabet.
pub fn validate_label(label: &str) -> Result<(), GraphError> {
    if label.is_empty() {
        return Err(GraphError::EmptyLabel);
    }
    if !label
        .bytes()
        .all(|b| b.is_ascii_alphanumeric() || b == b'_')
    {
        return Err(GraphError::BadLabel(label.to_string()));
    }
    Ok(())
}

/// An undirected simple graph with one opaque label per vertex.
///
/// Vertices are indexed `0..V`. No self-loops, no multi-edges. Used both for
/// dataset members (which may be disconnected or even empty) and for mined
/// patterns (which are additionally connected, see [`crate::pattern::Pattern`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    labels: Vec<String>,
    adj: Vec<Vec<u32>>,
    adj_bits: Vec<Vec<u64>>,
    edges: Vec<(u32, u32)>,
}

impl LabeledGraph {
    /// Builds a graph from labels and an edge list, validating the
    /// simple-graph invariants. Edge endpoint order is irrelevant.
    pub fn new(
        labels: Vec<String>,
        edge_list: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        for l in &labels {
            validate_label(l)?;
        }
        let words = n.div_ceil(64);
        let mut adj = vec![Vec::new(); n];
        let mut adj_bits = vec![vec![0u64; words]; n];
        let mut edges = Vec::new();
        for (a, b) in edge_list {
            if a as usize >= n {
                return Err(GraphError::BadEndpoint(a, n));
            }
            if b as usize >= n {
                return Err(GraphError::BadEndpoint(b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if adj_bits[u as usize][(v / 64) as usize] >> (v % 64) & 1 == 1 {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj_bits[u as usize][(v / 64) as usize] |= 1 << (v % 64);
            adj_bits[v as usize][(u / 64) as usize] |= 1 << (u % 64);
            adj[u as usize].push(v);
            adj[v as usize].push(u);
            edges.push((u, v));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        edges.sort_unstable();
        Ok(Self {
            labels,
            adj,
            adj_bits,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// Edges as `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        if u == v || u as usize >= self.labels.len() || v as usize >= self.labels.len() {
            return false;
        }
        self.adj_bits[u as usize][(v / 64) as usize] >> (v % 64) & 1 == 1
    }

    /// Adjacency row of `v` as a bitset (one bit per vertex).
    pub(crate) fn adj_row(&self, v: u32) -> &[u64] {
        &self.adj_bits[v as usize]
    }

    /// Unordered label pair of an edge, sorted lexicographically.
    pub fn edge_label_pair(&self, u: u32, v: u32) -> (String, String) {
        let (a, b) = (self.label(u), self.label(v));
        if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        }
    }

    /// True if the graph is connected. The empty graph counts as connected;
    /// a single vertex does too.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    visited += 1;
                    stack.push(w);
                }
            }
        }
        visited == n
    }

    /// Copy with one extra edge between existing vertices.
    pub fn with_edge(&self, u: u32, v: u32) -> Result<Self, GraphError> {
        let mut edges = self.edges.clone();
        edges.push((u.min(v), u.max(v)));
        Self::new(self.labels.clone(), edges)
    }

    /// Copy without the given edge. Vertices are kept as-is; callers decide
    /// what to do with anything this isolates.
    pub fn without_edge(&self, u: u32, v: u32) -> Result<Self, GraphError> {
        let key = (u.min(v), u.max(v));
        let edges: Vec<_> = self.edges.iter().copied().filter(|&e| e != key).collect();
        Self::new(self.labels.clone(), edges)
    }

    /// Copy with a new vertex labeled `label` attached to `anchor`.
    pub fn with_attached_vertex(&self, anchor: u32, label: &str) -> Result<Self, GraphError> {
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        let new = self.labels.len() as u32;
        let mut edges = self.edges.clone();
        edges.push((anchor, new));
        Self::new(labels, edges)
    }

    /// Copy with one vertex removed; remaining vertices are renumbered to stay
    /// contiguous.
    pub fn without_vertex(&self, victim: u32) -> Result<Self, GraphError> {
        let mut labels = Vec::with_capacity(self.labels.len() - 1);
        let mut remap = vec![u32::MAX; self.labels.len()];
        let mut next = 0u32;
        for (i, l) in self.labels.iter().enumerate() {
            if i as u32 != victim {
                remap[i] = next;
                labels.push(l.clone());
                next += 1;
            }
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| u != victim && v != victim)
            .map(|&(u, v)| (remap[u as usize], remap[v as usize]))
            .collect();
        Self::new(labels, edges)
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices, {} edges", self.vertex_count(), self.edge_count())
    }
}

/// Structural bounds on the pattern space: vertex-count window, optional edge
/// cap, and the label alphabet.
///
/// `v_min` filters final outputs only; walk states are bounded by `v_max` and
/// `e_max` alone so the pattern space stays connected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub v_min: usize,
    pub v_max: usize,
    pub e_max: Option<usize>,
    pub labels: BTreeSet<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("label alphabet is empty")]
    NoLabels,
    #[error("v_max must be at least 2, got {0}")]
    VMaxTooSmall(usize),
    #[error("v_min {0} exceeds v_max {1}")]
    VMinAboveVMax(usize, usize),
    #[error("e_max must be at least 1")]
    EMaxTooSmall,
    #[error(transparent)]
    Label(#[from] GraphError),
}

impl RuleSet {
    pub fn new(
        v_min: usize,
        v_max: usize,
        e_max: Option<usize>,
        labels: impl IntoIterator<Item = String>,
    ) -> Result<Self, RuleError> {
        let labels: BTreeSet<String> = labels.into_iter().collect();
        if labels.is_empty() {
            return Err(RuleError::NoLabels);
        }
        for l in &labels {
            validate_label(l)?;
        }
        if v_max < 2 {
            return Err(RuleError::VMaxTooSmall(v_max));
        }
        if v_min > v_max {
            return Err(RuleError::VMinAboveVMax(v_min, v_max));
        }
        if e_max == Some(0) {
            return Err(RuleError::EMaxTooSmall);
        }
        Ok(Self {
            v_min,
            v_max,
            e_max,
            labels,
        })
    }

    /// Convenience constructor with `v_min = 2` and no edge cap.
    pub fn with_labels(v_max: usize, labels: &[&str]) -> Result<Self, RuleError> {
        Self::new(2, v_max, None, labels.iter().map(|s| s.to_string()))
    }

    /// True if `g` is admissible as a random-walk state: connected, at least
    /// one edge, within `v_max`/`e_max`, labels drawn from the alphabet.
    pub fn permits_state(&self, g: &LabeledGraph) -> bool {
        g.edge_count() >= 1
            && g.vertex_count() <= self.v_max
            && self.e_max.is_none_or(|m| g.edge_count() <= m)
            && g.labels().iter().all(|l| self.labels.contains(l))
            && g.is_connected()
    }

    /// True if `g` may appear in final output: a valid state that also meets
    /// the `v_min` floor.
    pub fn permits_output(&self, g: &LabeledGraph) -> bool {
        g.vertex_count() >= self.v_min && self.permits_state(g)
    }
}
