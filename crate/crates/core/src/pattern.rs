//! Graph patterns: connected labeled graphs carrying their canonical code.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_code, graph_from_code, min_dfs_code, CanonError};
use crate::graph::{GraphError, LabeledGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("stored code {stored:?} does not match recomputed code {actual:?}")]
    CodeMismatch { stored: String, actual: String },
}

/// A connected pattern with at least one edge, stored in canonical form:
/// vertices are renumbered into minimum-DFS-code discovery order, so two
/// isomorphic inputs produce byte-identical patterns.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PatternJson", into = "PatternJson")]
pub struct Pattern {
    graph: LabeledGraph,
    code: String,
}

impl Pattern {
    /// Canonicalizes an arbitrary connected graph into a pattern.
    pub fn from_graph(g: &LabeledGraph) -> Result<Self, PatternError> {
        let code = min_dfs_code(g)?;
        let graph = graph_from_code(&code);
        Ok(Self {
            graph,
            code: crate::canon::code_to_string(&code),
        })
    }

    /// Builds the two-vertex pattern for an unordered label pair.
    pub fn single_edge(a: &str, b: &str) -> Result<Self, PatternError> {
        let g = LabeledGraph::new(vec![a.to_string(), b.to_string()], vec![(0, 1)])?;
        Self::from_graph(&g)
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn is_single_edge(&self) -> bool {
        self.graph.edge_count() == 1
    }

    /// Distinct unordered label pairs over this pattern's edges; the keys used
    /// against a dataset's edge index.
    pub fn label_pairs(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<_> = self
            .graph
            .edges()
            .iter()
            .map(|&(u, v)| self.graph.edge_label_pair(u, v))
            .collect();
        pairs.sort();
        pairs.dedup();
        pairs
    }

    /// Serializes to the pattern JSON form. Deterministic: isomorphic patterns
    /// serialize to identical bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pattern serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for Pattern {}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pattern {
    /// Shorter codes order first, lexicographic within a length: a DFS code
    /// precedes every extension of itself.
    fn cmp(&self, other: &Self) -> Ordering {
        self.edge_count()
            .cmp(&other.edge_count())
            .then_with(|| self.code.cmp(&other.code))
    }
}

impl Hash for Pattern {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

/// Wire form: `{"vertices":[["0","A"],...],"edges":[[0,1],...],"code":"..."}`.
#[derive(Serialize, Deserialize)]
struct PatternJson {
    vertices: Vec<(String, String)>,
    edges: Vec<(u32, u32)>,
    code: String,
}

impl From<Pattern> for PatternJson {
    fn from(p: Pattern) -> Self {
        PatternJson {
            vertices: p
                .graph
                .labels()
                .iter()
                .enumerate()
                .map(|(i, l)| (i.to_string(), l.clone()))
                .collect(),
            edges: p.graph.edges().to_vec(),
            code: p.code,
        }
    }
}

impl TryFrom<PatternJson> for Pattern {
    type Error = PatternError;

    fn try_from(j: PatternJson) -> Result<Self, Self::Error> {
        let mut labels = vec![String::new(); j.vertices.len()];
        for (idx, label) in &j.vertices {
            let i: usize = idx
                .parse()
                .map_err(|_| GraphError::BadLabel(idx.clone()))?;
            if i >= labels.len() {
                return Err(GraphError::BadEndpoint(i as u32, labels.len()).into());
            }
            labels[i] = label.clone();
        }
        let g = LabeledGraph::new(labels, j.edges)?;
        let actual = canonical_code(&g)?;
        if actual != j.code {
            return Err(PatternError::CodeMismatch {
                stored: j.code,
                actual,
            });
        }
        Pattern::from_graph(&g)
    }
}
