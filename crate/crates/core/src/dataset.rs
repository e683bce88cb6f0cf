//! Graph dataset container, per-label-pair edge index, and the line-oriented
//! dataset file format.
//!
//! File format (UTF-8, one record per line):
//!
//! ```text
//! t # <graph-id>      starts a new graph
//! v <idx> <label>     vertex, indices must appear as 0,1,2,...
//! e <u> <v>           undirected edge between declared vertices
//! ```
//!
//! Blank lines are ignored and lines starting with `#` are comments.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bitset::GidSet;
use crate::graph::{validate_label, GraphError, LabeledGraph};
use crate::pattern::Pattern;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed line: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: duplicate vertex index {idx}")]
    DuplicateVertex { line: usize, idx: usize },
    #[error("line {line}: vertex index {idx} out of order (expected {expected})")]
    OutOfOrderVertex {
        line: usize,
        idx: usize,
        expected: usize,
    },
    #[error("line {line}: edge references unknown vertex {idx}")]
    UnknownVertex { line: usize, idx: usize },
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    MultiEdge { line: usize, u: u32, v: u32 },
    #[error("line {line}: vertex or edge outside any graph (missing 't' line)")]
    NoGraphStarted { line: usize },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

/// An ordered multiset of labeled graphs with stable ids `0..n`, plus the
/// per-label-pair edge index: `edge_index[(a,b)]` holds the ids of graphs
/// containing at least one edge whose endpoint labels are `{a,b}`.
#[derive(Debug, Clone)]
pub struct GraphDataset {
    graphs: Vec<LabeledGraph>,
    edge_index: BTreeMap<(String, String), GidSet>,
}

impl GraphDataset {
    pub fn from_graphs(graphs: Vec<LabeledGraph>) -> Self {
        let n = graphs.len();
        let mut edge_index: BTreeMap<(String, String), GidSet> = BTreeMap::new();
        for (gid, g) in graphs.iter().enumerate() {
            for &(u, v) in g.edges() {
                edge_index
                    .entry(g.edge_label_pair(u, v))
                    .or_insert_with(|| GidSet::empty(n))
                    .insert(gid);
            }
        }
        Self { graphs, edge_index }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graph(&self, gid: usize) -> &LabeledGraph {
        &self.graphs[gid]
    }

    pub fn graphs(&self) -> &[LabeledGraph] {
        &self.graphs
    }

    /// Ids of graphs holding at least one `{a,b}`-labeled edge.
    pub fn edge_bitmap(&self, a: &str, b: &str) -> Option<&GidSet> {
        let key = if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        self.edge_index.get(&key)
    }

    /// All distinct label pairs present in the dataset, with their bitmaps.
    pub fn edge_index(&self) -> &BTreeMap<(String, String), GidSet> {
        &self.edge_index
    }

    /// Sorted set of labels observed anywhere in the dataset.
    pub fn observed_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .graphs
            .iter()
            .flat_map(|g| g.labels().iter().cloned())
            .collect();
        labels.sort();
        labels.dedup();
        labels
    }

    /// Intersection of the edge bitmaps over all of a pattern's label pairs:
    /// a superset of the graphs that can contain the pattern. Exact for
    /// single-edge patterns.
    pub fn candidate_gids(&self, p: &Pattern) -> GidSet {
        let mut acc = GidSet::full(self.len());
        for (a, b) in p.label_pairs() {
            match self.edge_index.get(&(a, b)) {
                Some(bits) => acc.intersect_with(bits),
                None => return GidSet::empty(self.len()),
            }
        }
        acc
    }

    /// The first `n` graphs as a new dataset; used for dataset-fraction
    /// experiments.
    pub fn prefix(&self, n: usize) -> GraphDataset {
        GraphDataset::from_graphs(self.graphs[..n.min(self.graphs.len())].to_vec())
    }
}

/// Parses the line-oriented dataset format.
pub fn parse_dataset(text: &str) -> Result<GraphDataset, ParseError> {
    struct Building {
        labels: Vec<String>,
        edges: Vec<(u32, u32)>,
    }
    let mut graphs: Vec<LabeledGraph> = Vec::new();
    let mut current: Option<Building> = None;

    let finish = |b: Building, line: usize, out: &mut Vec<LabeledGraph>| -> Result<(), ParseError> {
        let g = LabeledGraph::new(b.labels, b.edges)
            .map_err(|source| ParseError::Graph { line, source })?;
        out.push(g);
        Ok(())
    };

    let mut last_line = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let tag = fields.next().unwrap();
        let rest: Vec<&str> = fields.collect();
        match tag {
            "t" => {
                if rest.len() != 2 || rest[0] != "#" {
                    return Err(ParseError::Malformed {
                        line,
                        msg: format!("expected 't # <id>', got {trimmed:?}"),
                    });
                }
                if let Some(b) = current.take() {
                    finish(b, line, &mut graphs)?;
                }
                current = Some(Building {
                    labels: Vec::new(),
                    edges: Vec::new(),
                });
            }
            "v" => {
                let b = current.as_mut().ok_or(ParseError::NoGraphStarted { line })?;
                if rest.len() != 2 {
                    return Err(ParseError::Malformed {
                        line,
                        msg: format!("expected 'v <idx> <label>', got {trimmed:?}"),
                    });
                }
                let idx: usize = rest[0].parse().map_err(|_| ParseError::Malformed {
                    line,
                    msg: format!("bad vertex index {:?}", rest[0]),
                })?;
                if idx < b.labels.len() {
                    return Err(ParseError::DuplicateVertex { line, idx });
                }
                if idx > b.labels.len() {
                    return Err(ParseError::OutOfOrderVertex {
                        line,
                        idx,
                        expected: b.labels.len(),
                    });
                }
                validate_label(rest[1])
                    .map_err(|source| ParseError::Graph { line, source })?;
                b.labels.push(rest[1].to_string());
            }
            "e" => {
                let b = current.as_mut().ok_or(ParseError::NoGraphStarted { line })?;
                if rest.len() != 2 {
                    return Err(ParseError::Malformed {
                        line,
                        msg: format!("expected 'e <u> <v>', got {trimmed:?}"),
                    });
                }
                let parse_end = |s: &str| -> Result<u32, ParseError> {
                    s.parse().map_err(|_| ParseError::Malformed {
                        line,
                        msg: format!("bad edge endpoint {s:?}"),
                    })
                };
                let u = parse_end(rest[0])?;
                let v = parse_end(rest[1])?;
                if u == v {
                    return Err(ParseError::SelfLoop { line });
                }
                for x in [u, v] {
                    if x as usize >= b.labels.len() {
                        return Err(ParseError::UnknownVertex {
                            line,
                            idx: x as usize,
                        });
                    }
                }
                let key = (u.min(v), u.max(v));
                if b.edges.contains(&key) {
                    return Err(ParseError::MultiEdge {
                        line,
                        u: key.0,
                        v: key.1,
                    });
                }
                b.edges.push(key);
            }
            other => {
                return Err(ParseError::Malformed {
                    line,
                    msg: format!("unknown record tag {other:?}"),
                });
            }
        }
    }
    if let Some(b) = current.take() {
        finish(b, last_line, &mut graphs)?;
    }
    Ok(GraphDataset::from_graphs(graphs))
}

/// Writes a dataset back to the file format. Output is deterministic.
pub fn write_dataset(d: &GraphDataset) -> String {
    let mut out = String::new();
    for (gid, g) in d.graphs().iter().enumerate() {
        out.push_str(&format!("t # {gid}\n"));
        for (i, l) in g.labels().iter().enumerate() {
            out.push_str(&format!("v {i} {l}\n"));
        }
        for &(u, v) in g.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_legal_file() {
        let d = parse_dataset("t # 0\nv 0 A\nv 1 B\ne 0 1\n").unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.graph(0).vertex_count(), 2);
        assert_eq!(d.graph(0).label(0), "A");
        assert_eq!(d.graph(0).label(1), "B");
        assert_eq!(d.graph(0).edge_count(), 1);
    }

    #[test]
    fn self_loop_reports_line() {
        let err = parse_dataset("t # 0\nv 0 A\ne 0 0\n").unwrap_err();
        assert_eq!(err, ParseError::SelfLoop { line: 3 });
        assert_eq!(err.to_string(), "self-loop at line 3");
    }

    #[test]
    fn duplicate_vertex_and_unknown_endpoint() {
        let err = parse_dataset("t # 0\nv 0 A\nv 0 B\n").unwrap_err();
        assert_eq!(err, ParseError::DuplicateVertex { line: 3, idx: 0 });

        let err = parse_dataset("t # 0\nv 0 A\ne 0 5\n").unwrap_err();
        assert_eq!(err, ParseError::UnknownVertex { line: 3, idx: 5 });
    }

    #[test]
    fn multi_edge_rejected_either_orientation() {
        let err = parse_dataset("t # 0\nv 0 A\nv 1 B\ne 0 1\ne 1 0\n").unwrap_err();
        assert_eq!(err, ParseError::MultiEdge { line: 5, u: 0, v: 1 });
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let d = parse_dataset("# header\n\nt # 0\nv 0 A\nv 1 A\n\n# mid\ne 0 1\n").unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn edge_index_by_direct_scan() {
        let text = "t # 0\nv 0 A\nv 1 B\ne 0 1\nt # 1\nv 0 B\nv 1 A\ne 0 1\nt # 2\nv 0 A\nv 1 A\ne 0 1\n";
        let d = parse_dataset(text).unwrap();
        assert_eq!(d.edge_bitmap("A", "B").unwrap().to_vec(), vec![0, 1]);
        assert_eq!(d.edge_bitmap("B", "A").unwrap().to_vec(), vec![0, 1]);
        assert_eq!(d.edge_bitmap("A", "A").unwrap().to_vec(), vec![2]);
        assert!(d.edge_bitmap("B", "B").is_none());

        // membership in the index must equal existence of an {a,b} edge
        for (pair, bits) in d.edge_index() {
            for gid in 0..d.len() {
                let direct = d.graph(gid).edges().iter().any(|&(u, v)| {
                    d.graph(gid).edge_label_pair(u, v) == *pair
                });
                assert_eq!(bits.contains(gid), direct);
            }
        }
    }

    #[test]
    fn round_trip_write_parse() {
        let text = "t # 0\nv 0 A\nv 1 B\nv 2 C\ne 0 1\ne 1 2\nt # 1\nv 0 D\n";
        let d = parse_dataset(text).unwrap();
        let written = write_dataset(&d);
        let d2 = parse_dataset(&written).unwrap();
        assert_eq!(d2.len(), d.len());
        for gid in 0..d.len() {
            assert_eq!(d.graph(gid), d2.graph(gid));
        }
        assert_eq!(write_dataset(&d2), written);
    }
}
