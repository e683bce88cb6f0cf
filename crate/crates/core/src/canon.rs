//! Canonical identity for connected labeled graphs via minimum DFS codes.
//!
//! A DFS code lists a graph's edges in the order a depth-first traversal
//! discovers them, each entry carrying the discovery indices and endpoint
//! labels. Ranging over all valid traversals and taking the lexicographically
//! smallest code yields a canonical form: two graphs share their minimum code
//! exactly when they are isomorphic.

use std::cmp::Ordering;

use thiserror::Error;

use crate::graph::LabeledGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("graph has no edges")]
    NoEdges,
    #[error("graph is not connected")]
    Disconnected,
}

/// One edge of a DFS code. `from`/`to` are discovery indices; the edge is a
/// forward (tree) edge when `from < to` and a backward edge otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfsEdge {
    pub from: u32,
    pub to: u32,
    pub from_label: String,
    pub to_label: String,
}

/// Compact entry used during the search: labels as ranks into the graph's
/// sorted label set, so comparisons stay cheap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Entry {
    from: u16,
    to: u16,
    fl: u16,
    tl: u16,
}

/// DFS lexicographic order on code entries.
fn entry_cmp(a: &Entry, b: &Entry) -> Ordering {
    let a_fwd = a.from < a.to;
    let b_fwd = b.from < b.to;
    let on_index = match (a_fwd, b_fwd) {
        // Forward edges: earlier target first; on ties the deeper source wins.
        (true, true) => a
            .to
            .cmp(&b.to)
            .then_with(|| b.from.cmp(&a.from)),
        // Backward edges: earlier source first, then earlier target.
        (false, false) => a.from.cmp(&b.from).then_with(|| a.to.cmp(&b.to)),
        // Backward before forward iff its source precedes the forward target.
        (false, true) => {
            if a.from < b.to {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        (true, false) => {
            if a.to <= b.from {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    };
    on_index.then_with(|| (a.fl, a.tl).cmp(&(b.fl, b.tl)))
}

fn cmp_codes(a: &[Entry], b: &[Entry]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let c = entry_cmp(x, y);
        if c != Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Clone)]
struct State {
    code: Vec<Entry>,
    /// vertex -> dfs index, -1 when unmapped
    dfs_of: Vec<i32>,
    /// dfs index -> vertex
    verts: Vec<u32>,
    /// rightmost path as vertex ids, root first
    rm_path: Vec<u32>,
    /// bitmask over edge ids already emitted
    used: u128,
}

enum Act {
    Back { w: u32 },
    Fwd { from: u32, new: u32 },
}

struct Ctx<'g> {
    g: &'g LabeledGraph,
    lrank: Vec<u16>,
    total_edges: usize,
    best: Option<Vec<Entry>>,
}

fn edge_id(g: &LabeledGraph, u: u32, v: u32) -> usize {
    let key = (u.min(v), u.max(v));
    g.edges().binary_search(&key).expect("edge must exist")
}

fn candidates(ctx: &Ctx, st: &State) -> Vec<(Entry, Act)> {
    let g = ctx.g;
    let mut out = Vec::new();
    let r = *st.rm_path.last().unwrap();
    let rd = st.dfs_of[r as usize] as u16;
    // Backward targets must increase within a run of backward edges from the
    // same rightmost vertex; any other order can never be minimal.
    let min_back = match st.code.last() {
        Some(e) if e.from > e.to && e.from == rd => e.to + 1,
        _ => 0,
    };
    for &w in g.neighbors(r) {
        let dw = st.dfs_of[w as usize];
        if dw < 0 {
            continue;
        }
        let dw = dw as u16;
        if dw >= rd || dw < min_back {
            continue;
        }
        if st.used >> edge_id(g, r, w) & 1 == 1 {
            continue;
        }
        if !st.rm_path.contains(&w) {
            continue; // cross edges never occur in a valid traversal
        }
        out.push((
            Entry {
                from: rd,
                to: dw,
                fl: ctx.lrank[r as usize],
                tl: ctx.lrank[w as usize],
            },
            Act::Back { w },
        ));
    }
    let next = st.verts.len() as u16;
    for &w in &st.rm_path {
        let dw = st.dfs_of[w as usize] as u16;
        for &u in g.neighbors(w) {
            if st.dfs_of[u as usize] >= 0 {
                continue;
            }
            out.push((
                Entry {
                    from: dw,
                    to: next,
                    fl: ctx.lrank[w as usize],
                    tl: ctx.lrank[u as usize],
                },
                Act::Fwd { from: w, new: u },
            ));
        }
    }
    out
}

fn apply(st: &mut State, entry: Entry, act: &Act, ctx: &Ctx) {
    match *act {
        Act::Back { w } => {
            let r = *st.rm_path.last().unwrap();
            st.used |= 1 << edge_id(ctx.g, r, w);
            st.code.push(entry);
        }
        Act::Fwd { from, new } => {
            st.used |= 1 << edge_id(ctx.g, from, new);
            st.dfs_of[new as usize] = st.verts.len() as i32;
            st.verts.push(new);
            let pos = st.rm_path.iter().position(|&x| x == from).unwrap();
            st.rm_path.truncate(pos + 1);
            st.rm_path.push(new);
            st.code.push(entry);
        }
    }
}

fn search(ctx: &mut Ctx, st: &State) {
    let rel = match &ctx.best {
        Some(b) => {
            let r = cmp_codes(&st.code, &b[..st.code.len()]);
            if r == Ordering::Greater {
                return;
            }
            r
        }
        None => Ordering::Less,
    };
    if st.code.len() == ctx.total_edges {
        if rel == Ordering::Less {
            ctx.best = Some(st.code.clone());
        }
        return;
    }
    let mut cands = candidates(ctx, st);
    cands.sort_by(|a, b| entry_cmp(&a.0, &b.0));
    for (e, act) in cands {
        if rel == Ordering::Equal {
            if let Some(b) = &ctx.best {
                if entry_cmp(&e, &b[st.code.len()]) == Ordering::Greater {
                    break; // sorted, so everything after is worse
                }
            }
        }
        let mut child = st.clone();
        apply(&mut child, e, &act, ctx);
        search(ctx, &child);
    }
}

/// Computes the minimum DFS code of a connected graph with at least one edge.
pub fn min_dfs_code(g: &LabeledGraph) -> Result<Vec<DfsEdge>, CanonError> {
    if g.edge_count() == 0 {
        return Err(CanonError::NoEdges);
    }
    if !g.is_connected() {
        return Err(CanonError::Disconnected);
    }
    assert!(g.edge_count() <= 128, "patterns are bounded well below 128 edges");

    let mut sorted_labels: Vec<&String> = g.labels().iter().collect();
    sorted_labels.sort();
    sorted_labels.dedup();
    let lrank: Vec<u16> = g
        .labels()
        .iter()
        .map(|l| sorted_labels.binary_search(&l).unwrap() as u16)
        .collect();

    let mut ctx = Ctx {
        g,
        lrank,
        total_edges: g.edge_count(),
        best: None,
    };

    let n = g.vertex_count();
    for &(a, b) in g.edges() {
        for (root, second) in [(a, b), (b, a)] {
            let mut dfs_of = vec![-1i32; n];
            dfs_of[root as usize] = 0;
            dfs_of[second as usize] = 1;
            let st = State {
                code: vec![Entry {
                    from: 0,
                    to: 1,
                    fl: ctx.lrank[root as usize],
                    tl: ctx.lrank[second as usize],
                }],
                dfs_of,
                verts: vec![root, second],
                rm_path: vec![root, second],
                used: 1 << edge_id(g, root, second),
            };
            search(&mut ctx, &st);
        }
    }

    let best = ctx.best.expect("connected graph always has a complete code");
    Ok(best
        .iter()
        .map(|e| DfsEdge {
            from: e.from as u32,
            to: e.to as u32,
            from_label: sorted_labels[e.fl as usize].clone(),
            to_label: sorted_labels[e.tl as usize].clone(),
        })
        .collect())
}

/// Renders a DFS code as a compact string, one `from-to-fromlabel-tolabel`
/// element per edge. Labels are `[A-Za-z0-9_]+`, so `-` and `;` are safe
/// separators.
pub fn code_to_string(code: &[DfsEdge]) -> String {
    code.iter()
        .map(|e| format!("{}-{}-{}-{}", e.from, e.to, e.from_label, e.to_label))
        .collect::<Vec<_>>()
        .join(";")
}

/// Rebuilds the graph a DFS code describes, with vertices renumbered in
/// discovery order. Feeding back the code of a graph yields its canonical
/// form.
pub fn graph_from_code(code: &[DfsEdge]) -> LabeledGraph {
    let n = code.iter().map(|e| e.from.max(e.to)).max().unwrap_or(0) as usize + 1;
    let mut labels = vec![String::new(); n];
    let mut edges = Vec::with_capacity(code.len());
    for e in code {
        labels[e.from as usize] = e.from_label.clone();
        labels[e.to as usize] = e.to_label.clone();
        edges.push((e.from, e.to));
    }
    LabeledGraph::new(labels, edges).expect("DFS codes describe simple graphs")
}

/// Canonical code string of a connected graph.
pub fn canonical_code(g: &LabeledGraph) -> Result<String, CanonError> {
    Ok(code_to_string(&min_dfs_code(g)?))
}
