//! Bottleneck-edge baseline: repeatedly join a pair attaining the maximum
//! dilation.
//!
//! Carries no approximation guarantee; the construction in
//! [`crate::constructions::gen_bottleneck_lb`] forces it a factor `2^k` from
//! optimal.

use crate::apsp::compute_apsp;
use crate::metric::{EdgeCandidate, MetricGraph};
use crate::search::AugmentationResult;
use crate::Error;

/// Run `k` bottleneck iterations: compute the dilation argmax pair, add that
/// edge, repeat. Ties break toward the lexicographically smallest pair.
/// Disconnected pairs rank as infinite dilation, so they are served first.
/// Stops early once the graph is complete or no pair can be improved.
pub fn bottleneck_augment(graph: &MetricGraph, k: usize) -> Result<AugmentationResult, Error> {
    if k == 0 {
        return Err(Error::ZeroBudget);
    }
    let n = graph.n();
    let all_pairs = n * (n - 1) / 2;
    let space = graph.space();
    let mut apsp = compute_apsp(graph);
    let mut added: Vec<EdgeCandidate> = Vec::new();
    for _ in 0..k {
        if graph.edge_count() + added.len() == all_pairs {
            break;
        }
        let (_, (u, v)) = apsp.dilation(space);
        if graph.has_edge(u, v) || added.iter().any(|e| e.pair() == (u, v)) {
            // The argmax pair is already joined, so every pair sits at
            // dilation <= 1 and no addition can improve the graph.
            break;
        }
        let len = space.dist(u, v);
        apsp.insert_edge(u, v, len);
        added.push(EdgeCandidate::new(u, v, len));
    }
    let pairs: Vec<(usize, usize)> = added.iter().map(EdgeCandidate::pair).collect();
    let augmented = graph.with_edges(&pairs)?;
    let achieved_dilation = compute_apsp(&augmented).dilation(space).0;
    Ok(AugmentationResult {
        edges: added,
        achieved_dilation,
        certified_factor: None,
        grid_trace: Vec::new(),
    })
}
