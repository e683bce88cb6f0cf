//! Brute-force oracles and random-instance generators shared by the
//! integration tests. Everything here is independent of the library's
//! matcher, canonical codes, and exploration strategies: isomorphism is
//! decided by exhaustive vertex bijection, containment by exhaustive
//! injective assignment.

use privmine_core::graph::LabeledGraph;
use privmine_core::{GraphDataset, Pattern};
use rand::Rng;

/// All permutations of `0..n` via Heap's algorithm.
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut items: Vec<u32> = (0..n as u32).collect();
    let mut out = Vec::new();
    fn heap(k: usize, items: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// Exhaustive graph-isomorphism check: some label-preserving vertex bijection
/// maps the edge set of `a` exactly onto the edge set of `b`.
pub fn brute_isomorphic(a: &LabeledGraph, b: &LabeledGraph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let n = a.vertex_count();
    'perm: for perm in permutations(n) {
        for v in 0..n as u32 {
            if a.label(v) != b.label(perm[v as usize]) {
                continue 'perm;
            }
        }
        for &(u, v) in a.edges() {
            if !b.has_edge(perm[u as usize], perm[v as usize]) {
                continue 'perm;
            }
        }
        return true;
    }
    false
}

/// Exhaustive enumeration of injective label- and edge-preserving maps of
/// `pattern` into `host` (non-induced).
pub fn brute_mappings(pattern: &LabeledGraph, host: &LabeledGraph) -> Vec<Vec<u32>> {
    let np = pattern.vertex_count();
    let nh = host.vertex_count();
    let mut out = Vec::new();
    if np > nh {
        return out;
    }
    let mut assign = vec![u32::MAX; np];
    let mut used = vec![false; nh];
    fn rec(
        v: usize,
        pattern: &LabeledGraph,
        host: &LabeledGraph,
        assign: &mut Vec<u32>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let np = pattern.vertex_count();
        if v == np {
            for &(a, b) in pattern.edges() {
                if !host.has_edge(assign[a as usize], assign[b as usize]) {
                    return;
                }
            }
            out.push(assign.clone());
            return;
        }
        for h in 0..host.vertex_count() as u32 {
            if used[h as usize] || host.label(h) != pattern.label(v as u32) {
                continue;
            }
            assign[v] = h;
            used[h as usize] = true;
            rec(v + 1, pattern, host, assign, used, out);
            used[h as usize] = false;
            assign[v] = u32::MAX;
        }
    }
    rec(0, pattern, host, &mut assign, &mut used, &mut out);
    out
}

pub fn brute_contains(pattern: &LabeledGraph, host: &LabeledGraph) -> bool {
    !brute_mappings(pattern, host).is_empty()
}

/// Exact support of a pattern over a dataset by exhaustive search.
pub fn brute_support(pattern: &Pattern, d: &GraphDataset) -> usize {
    d.graphs()
        .iter()
        .filter(|g| brute_contains(pattern.graph(), g))
        .count()
}

/// A random simple graph with up to `max_v` vertices; may be disconnected.
pub fn random_graph(rng: &mut impl Rng, max_v: usize, labels: &[&str], edge_p: f64) -> LabeledGraph {
    let n = rng.gen_range(1..=max_v);
    let ls: Vec<String> = (0..n)
        .map(|_| labels[rng.gen_range(0..labels.len())].to_string())
        .collect();
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen::<f64>() < edge_p {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::new(ls, edges).unwrap()
}

/// A random connected pattern: spanning tree plus extra edges.
pub fn random_pattern(rng: &mut impl Rng, max_v: usize, labels: &[&str]) -> Pattern {
    let n = rng.gen_range(2..=max_v.max(2));
    let ls: Vec<String> = (0..n)
        .map(|_| labels[rng.gen_range(0..labels.len())].to_string())
        .collect();
    let mut edges = Vec::new();
    for v in 1..n as u32 {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if !edges.contains(&(u, v)) && rng.gen::<f64>() < 0.25 {
                edges.push((u, v));
            }
        }
    }
    Pattern::from_graph(&LabeledGraph::new(ls, edges).unwrap()).unwrap()
}

/// A random dataset of possibly-disconnected host graphs.
pub fn random_dataset(
    rng: &mut impl Rng,
    n_graphs: usize,
    max_v: usize,
    labels: &[&str],
    edge_p: f64,
) -> GraphDataset {
    GraphDataset::from_graphs(
        (0..n_graphs)
            .map(|_| random_graph(rng, max_v, labels, edge_p))
            .collect(),
    )
}
