//! Synthetic dataset generators and the checked-in three-graph fixture.
//!
//! Both generators are pure functions of their parameters and seed: the same
//! inputs reproduce the same dataset byte for byte.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::{parse_dataset, GraphDataset};
use crate::graph::LabeledGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("edge target {target} exceeds the simple-graph maximum {max} for {vertices} vertices")]
    InfeasibleEdgeTarget {
        target: usize,
        max: usize,
        vertices: usize,
    },
    #[error("parameters must be positive")]
    BadParams,
}

/// Shape of the click-graph generator's master tree and sampled subtrees.
#[derive(Debug, Clone)]
pub struct ClickParams {
    pub master_nodes: usize,
    pub depth: usize,
    pub fanout: usize,
    /// Mean vertex count of each sampled subtree.
    pub avg_nodes: usize,
    /// Labels are node ids modulo this alphabet size.
    pub alphabet: usize,
}

impl Default for ClickParams {
    fn default() -> Self {
        Self {
            master_nodes: 10_000,
            depth: 10,
            fanout: 6,
            avg_nodes: 4,
            alphabet: 10,
        }
    }
}

/// Poisson draw via Knuth's product method; fine for the small means used
/// here.
fn poisson(lambda: f64, rng: &mut impl Rng) -> usize {
    let limit = (-lambda).exp();
    let mut k = 0usize;
    let mut p = 1.0f64;
    loop {
        p *= rng.gen::<f64>();
        if p <= limit {
            return k;
        }
        k += 1;
    }
}

/// Tree datasets in the shape of web-session click graphs.
///
/// A random master tree is built first: a spine realizes the target depth,
/// then every remaining node attaches to a uniformly random node that still
/// has fanout capacity and is not at maximum depth. Each output graph is a
/// random connected subtree: a uniform seed node grown by repeatedly pulling
/// a uniform frontier neighbor until a Poisson-distributed target size (mean
/// `avg_nodes`) is reached.
pub fn gen_click(n_graphs: usize, params: &ClickParams, seed: u64) -> Result<GraphDataset, GenError> {
    if params.master_nodes < 2 || params.fanout == 0 || params.depth == 0 || params.alphabet == 0
        || params.avg_nodes < 2
    {
        return Err(GenError::BadParams);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // master tree: parent[i] for i >= 1
    let n = params.master_nodes;
    let mut parent = vec![0usize; n];
    let mut depth_of = vec![0usize; n];
    let mut child_count = vec![0usize; n];
    let spine_len = params.depth.min(n - 1);
    for i in 1..=spine_len {
        parent[i] = i - 1;
        depth_of[i] = i;
        child_count[i - 1] += 1;
    }
    let mut attachable: Vec<usize> = (0..=spine_len)
        .filter(|&i| depth_of[i] < params.depth && child_count[i] < params.fanout)
        .collect();
    for i in (spine_len + 1)..n {
        let slot = rng.gen_range(0..attachable.len());
        let p = attachable[slot];
        parent[i] = p;
        depth_of[i] = depth_of[p] + 1;
        child_count[p] += 1;
        if child_count[p] >= params.fanout {
            attachable.swap_remove(slot);
        }
        if depth_of[i] < params.depth {
            attachable.push(i);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        adj[i].push(parent[i]);
        adj[parent[i]].push(i);
    }

    let mut graphs = Vec::with_capacity(n_graphs);
    for _ in 0..n_graphs {
        let target = (2 + poisson(params.avg_nodes as f64 - 2.0, &mut rng)).min(n);
        let seed_node = rng.gen_range(0..n);
        let mut chosen: Vec<usize> = vec![seed_node];
        let mut in_set = std::collections::HashSet::new();
        in_set.insert(seed_node);
        let mut frontier: Vec<usize> = adj[seed_node].clone();
        while chosen.len() < target && !frontier.is_empty() {
            let slot = rng.gen_range(0..frontier.len());
            let next = frontier.swap_remove(slot);
            if !in_set.insert(next) {
                continue;
            }
            chosen.push(next);
            for &w in &adj[next] {
                if !in_set.contains(&w) {
                    frontier.push(w);
                }
            }
        }
        let index_of = |v: usize| chosen.iter().position(|&c| c == v).unwrap() as u32;
        let labels: Vec<String> = chosen
            .iter()
            .map(|&v| (v % params.alphabet).to_string())
            .collect();
        let mut edges = Vec::new();
        for &v in &chosen {
            if v != 0 && in_set.contains(&parent[v]) && chosen.contains(&v) {
                edges.push((index_of(parent[v]), index_of(v)));
            }
        }
        graphs.push(LabeledGraph::new(labels, edges).expect("subtrees are simple"));
    }
    Ok(GraphDataset::from_graphs(graphs))
}

/// Shape of the dense generator's graphs.
#[derive(Debug, Clone)]
pub struct DenseParams {
    pub avg_vertices: usize,
    pub avg_edges: usize,
    pub alphabet: usize,
}

impl Default for DenseParams {
    fn default() -> Self {
        Self {
            avg_vertices: 10,
            avg_edges: 35,
            alphabet: 4,
        }
    }
}

/// Dense graphs: vertex count uniform in `avg_vertices - 1 ..= avg_vertices + 1`,
/// a random spanning tree for connectivity, then random extra edges up to a
/// per-graph target that keeps the expected mean degree at
/// `2 * avg_edges / avg_vertices`.
pub fn gen_dense(n_graphs: usize, params: &DenseParams, seed: u64) -> Result<GraphDataset, GenError> {
    if params.avg_vertices < 3 || params.alphabet == 0 || params.avg_edges == 0 {
        return Err(GenError::BadParams);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ratio = params.avg_edges as f64 / params.avg_vertices as f64;
    let mut graphs = Vec::with_capacity(n_graphs);
    for _ in 0..n_graphs {
        let v = rng.gen_range(params.avg_vertices - 1..=params.avg_vertices + 1);
        let target_f = ratio * v as f64;
        let mut target = target_f.floor() as usize;
        if rng.gen::<f64>() < target_f.fract() {
            target += 1;
        }
        let max = v * (v - 1) / 2;
        if target > max {
            return Err(GenError::InfeasibleEdgeTarget {
                target,
                max,
                vertices: v,
            });
        }
        let target = target.max(v - 1); // spanning tree is the floor
        let labels: Vec<String> = (0..v)
            .map(|_| rng.gen_range(0..params.alphabet).to_string())
            .collect();
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(target);
        let mut present = std::collections::HashSet::new();
        for i in 1..v as u32 {
            let p = rng.gen_range(0..i);
            edges.push((p, i));
            present.insert((p, i));
        }
        while edges.len() < target {
            let a = rng.gen_range(0..v as u32);
            let b = rng.gen_range(0..v as u32);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if present.insert(key) {
                edges.push(key);
            }
        }
        graphs.push(LabeledGraph::new(labels, edges).expect("simple by construction"));
    }
    Ok(GraphDataset::from_graphs(graphs))
}

/// The hand-built three-graph dataset over labels `{A, C, D}` used throughout
/// the tests: every graph contains an `A-D` edge (support 3) and exactly two
/// contain the path `A-A-D` (support 2).
pub fn fixture_fig1() -> GraphDataset {
    let text = "\
t # 0
v 0 A
v 1 A
v 2 D
v 3 C
e 0 1
e 1 2
e 1 3
t # 1
v 0 A
v 1 A
v 2 D
e 0 1
e 0 2
e 1 2
t # 2
v 0 A
v 1 D
v 2 C
e 0 1
e 1 2
";
    parse_dataset(text).expect("fixture is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::write_dataset;
    use crate::iso::Matcher;
    use crate::pattern::Pattern;

    #[test]
    fn click_graphs_are_trees_with_expected_size() {
        let params = ClickParams {
            master_nodes: 500,
            ..ClickParams::default()
        };
        let d = gen_click(2000, &params, 7).unwrap();
        assert_eq!(d.len(), 2000);
        let mut total_v = 0usize;
        for g in d.graphs() {
            assert_eq!(g.edge_count(), g.vertex_count() - 1, "tree edge count");
            assert!(g.is_connected());
            total_v += g.vertex_count();
        }
        let mean = total_v as f64 / d.len() as f64;
        assert!((3.5..=4.5).contains(&mean), "mean vertex count {mean}");
    }

    #[test]
    fn click_determinism() {
        let params = ClickParams {
            master_nodes: 200,
            ..ClickParams::default()
        };
        let a = write_dataset(&gen_click(50, &params, 11).unwrap());
        let b = write_dataset(&gen_click(50, &params, 11).unwrap());
        assert_eq!(a, b);
        let c = write_dataset(&gen_click(50, &params, 12).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn dense_degree_and_simplicity() {
        let d = gen_dense(300, &DenseParams::default(), 3).unwrap();
        let mut deg_sum = 0usize;
        let mut v_sum = 0usize;
        for g in d.graphs() {
            v_sum += g.vertex_count();
            deg_sum += 2 * g.edge_count();
            assert!(g.is_connected());
        }
        let mean_degree = deg_sum as f64 / v_sum as f64;
        assert!(
            (6.3..=7.7).contains(&mean_degree),
            "mean degree {mean_degree}"
        );
    }

    #[test]
    fn dense_determinism_and_feasibility() {
        let a = write_dataset(&gen_dense(40, &DenseParams::default(), 9).unwrap());
        let b = write_dataset(&gen_dense(40, &DenseParams::default(), 9).unwrap());
        assert_eq!(a, b);
        let bad = DenseParams {
            avg_vertices: 5,
            avg_edges: 30,
            alphabet: 2,
        };
        assert!(matches!(
            gen_dense(10, &bad, 1),
            Err(GenError::InfeasibleEdgeTarget { .. })
        ));
    }

    #[test]
    fn fixture_supports() {
        let d = fixture_fig1();
        assert_eq!(d.len(), 3);
        let m = Matcher::new();
        let ad = Pattern::single_edge("A", "D").unwrap();
        assert_eq!(m.support(&ad, &d, false).count, 3);
        let aad = Pattern::from_graph(
            &LabeledGraph::new(
                vec!["A".into(), "A".into(), "D".into()],
                vec![(0, 1), (1, 2)],
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(m.support(&aad, &d, false).count, 2);
        assert_eq!(d.edge_bitmap("A", "D").unwrap().to_vec(), vec![0, 1, 2]);
    }
}
