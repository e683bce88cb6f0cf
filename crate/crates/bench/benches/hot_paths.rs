//! Hot-path benchmarks: the three neighbor-exploration strategies on dense
//! data, canonical-code computation, and support counting.

use criterion::{criterion_group, criterion_main, Criterion};

use privmine_core::graph::LabeledGraph;
use privmine_core::harness::{gen_click, gen_dense, ClickParams, DenseParams};
use privmine_core::miner::mine_exact_topk;
use privmine_core::neighborhood::{explore, generate_neighbors, ExclusionSet, ExploreMethod};
use privmine_core::{canon, GraphDataset, Matcher, Pattern, RuleSet};

fn dense_setup() -> (GraphDataset, RuleSet, Pattern) {
    let d = gen_dense(100, &DenseParams::default(), 3).unwrap();
    let rules = RuleSet::new(2, 6, None, d.observed_labels()).unwrap();
    let matcher = Matcher::new();
    // a frequent two-edge pattern: the top single edge grown by one vertex
    let base = mine_exact_topk(&d, 1, &rules, &matcher).unwrap().patterns[0]
        .0
        .clone();
    let x = generate_neighbors(&base, &rules).super_fwd[0].pattern.clone();
    (d, rules, x)
}

fn bench_explore(c: &mut Criterion) {
    let (d, rules, x) = dense_setup();
    let excl = ExclusionSet::new();
    let f = 50;
    let mut group = c.benchmark_group("explore_dense");
    for method in [
        ExploreMethod::Naive,
        ExploreMethod::Basic,
        ExploreMethod::Een,
    ] {
        group.bench_function(method.name(), |b| {
            b.iter(|| {
                let m = Matcher::new();
                explore(method, &x, &d, f, &excl, &rules, &m)
            })
        });
    }
    group.finish();
}

fn bench_canon(c: &mut Criterion) {
    let path: LabeledGraph = LabeledGraph::new(
        (0..10).map(|i| ((i * 3) % 4).to_string()).collect(),
        (0..9u32).map(|i| (i, i + 1)).collect::<Vec<_>>(),
    )
    .unwrap();
    let wheel = LabeledGraph::new(
        vec!["0".into(); 7],
        (1..7u32)
            .map(|i| (0u32, i))
            .chain((1..6u32).map(|i| (i, i + 1)))
            .chain(std::iter::once((6u32, 1u32)))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let mut group = c.benchmark_group("canonical_code");
    group.bench_function("path10_labeled", |b| b.iter(|| canon::min_dfs_code(&path)));
    group.bench_function("wheel7_unlabeled", |b| b.iter(|| canon::min_dfs_code(&wheel)));
    group.finish();
}

fn bench_support(c: &mut Criterion) {
    let click = gen_click(
        5_000,
        &ClickParams {
            alphabet: 3,
            ..ClickParams::default()
        },
        7,
    )
    .unwrap();
    let rules = RuleSet::new(2, 5, None, click.observed_labels()).unwrap();
    let matcher = Matcher::new();
    let edge = mine_exact_topk(&click, 1, &rules, &matcher).unwrap().patterns[0]
        .0
        .clone();
    let path = generate_neighbors(&edge, &rules).super_fwd[0].pattern.clone();
    let mut group = c.benchmark_group("support_click5k");
    group.bench_function("single_edge", |b| {
        b.iter(|| matcher.support(&edge, &click, false).count)
    });
    group.bench_function("two_edge_path", |b| {
        b.iter(|| matcher.support(&path, &click, false).count)
    });
    group.bench_function("two_edge_path_with_mappings", |b| {
        b.iter(|| matcher.support(&path, &click, true).count)
    });
    group.finish();
}

criterion_group!(benches, bench_explore, bench_canon, bench_support);
criterion_main!(benches);
