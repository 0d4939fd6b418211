//! Shared helpers for integration tests: seeded random instances and
//! independent reference implementations (kept free of the library's own
//! Dijkstra/Kruskal code paths).

use dilation_core::{MetricGraph, MetricSpace};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Uniform points in the unit square joined by a path in index order:
/// connected, reproducible, and with nontrivial dilation.
pub fn random_path_instance(n: usize, seed: u64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    let space = MetricSpace::euclidean(points).unwrap();
    MetricGraph::new(space, (0..n - 1).map(|i| (i, i + 1))).unwrap()
}

/// Path instance plus `extra` random chords.
#[allow(dead_code)]
pub fn random_chorded_instance(n: usize, extra: usize, seed: u64) -> MetricGraph {
    let base = random_path_instance(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut edges: Vec<(usize, usize)> = base.edges().collect();
    let mut candidates: Vec<(usize, usize)> =
        base.non_edges_sorted().iter().map(|c| c.pair()).collect();
    for _ in 0..extra.min(candidates.len()) {
        let pick = rng.random_range(0..candidates.len());
        edges.push(candidates.swap_remove(pick));
    }
    MetricGraph::new(base.space().clone(), edges).unwrap()
}

/// Cubic-recurrence APSP, independent of the library's Dijkstra passes.
#[allow(dead_code)]
pub fn floyd_warshall(graph: &MetricGraph) -> Vec<f64> {
    let n = graph.n();
    let mut d = vec![f64::INFINITY; n * n];
    for u in 0..n {
        d[u * n + u] = 0.0;
    }
    for (u, v) in graph.edges() {
        let w = graph.edge_len(u, v);
        d[u * n + v] = w;
        d[v * n + u] = w;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i * n + k] + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    d
}

/// Dense O(n^2) Prim pass over the complete metric graph, independent of the
/// library's Kruskal implementation. Returns the total tree weight.
#[allow(dead_code)]
pub fn prim_mst_weight(space: &MetricSpace) -> f64 {
    let n = space.n();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let mut next = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (next == usize::MAX || best[v] < best[next]) {
                next = v;
            }
        }
        in_tree[next] = true;
        total += best[next];
        for v in 0..n {
            if !in_tree[v] {
                let w = space.dist(next, v);
                if w < best[v] {
                    best[v] = w;
                }
            }
        }
    }
    total
}
