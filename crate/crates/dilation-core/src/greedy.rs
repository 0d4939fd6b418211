//! The budgeted greedy decision procedure.
//!
//! Sweep the non-edges of `G` by increasing length against a live
//! [`ApspMatrix`]. An edge whose current graph distance exceeds
//! `t * d_M * (1 + 1e-9)` is added and folded into the matrix; the sweep stops
//! once `k + 1` edges have been added. Completing the sweep with at most `k`
//! additions answers YES and certifies `t* <= t`; stopping early answers NO
//! and certifies `t* > t / (k + 1)`.

use crate::apsp::{compute_apsp, ApspMatrix};
use crate::metric::{EdgeCandidate, MetricGraph};
use crate::{Error, REL_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

/// Result of one decision sweep.
#[derive(Debug, Clone)]
pub struct DecisionOutcome {
    pub verdict: Verdict,
    /// Accepted edges in insertion order; at most `k` for YES, exactly
    /// `k + 1` for NO. Lengths are non-decreasing.
    pub added_edges: Vec<EdgeCandidate>,
    /// Dilation of `G` plus the added edges. YES only.
    pub final_dilation: Option<f64>,
    /// Number of candidates examined before termination.
    pub processed_count: usize,
}

/// One examined candidate in a [`greedy_trace`] log.
#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub candidate: EdgeCandidate,
    /// Graph distance between the endpoints at examination time.
    pub graph_dist: f64,
    pub accepted: bool,
}

fn sweep(
    graph: &MetricGraph,
    base: &ApspMatrix,
    k: usize,
    t: f64,
    mut trace: Option<&mut Vec<TraceEntry>>,
) -> Result<DecisionOutcome, Error> {
    if t.is_nan() || t <= 1.0 {
        return Err(Error::ThresholdTooLow(t));
    }
    if k == 0 {
        return Err(Error::ZeroBudget);
    }
    let candidates = graph.non_edges_sorted();
    let k = k.min(candidates.len()).max(1);

    let mut matrix = base.clone();
    let mut added = Vec::new();
    let mut processed = 0;
    for cand in &candidates {
        processed += 1;
        let graph_dist = matrix.get(cand.u, cand.v);
        // Strict predicate with slack toward rejection keeps YES sound.
        let accepted = graph_dist > t * cand.length * (1.0 + REL_TOL);
        if let Some(log) = trace.as_deref_mut() {
            log.push(TraceEntry {
                candidate: *cand,
                graph_dist,
                accepted,
            });
        }
        if accepted {
            matrix.insert_edge(cand.u, cand.v, cand.length);
            added.push(*cand);
            if added.len() == k + 1 {
                return Ok(DecisionOutcome {
                    verdict: Verdict::No,
                    added_edges: added,
                    final_dilation: None,
                    processed_count: processed,
                });
            }
        }
    }
    let (dilation, _) = matrix.dilation(graph.space());
    Ok(DecisionOutcome {
        verdict: Verdict::Yes,
        added_edges: added,
        final_dilation: Some(dilation),
        processed_count: processed,
    })
}

/// Decide whether `t* <= t` (YES) or `t* > t / (k + 1)` (NO) for the graph
/// and edge budget `k`. Budgets beyond the number of non-edges are capped.
pub fn greedy_decide(graph: &MetricGraph, k: usize, t: f64) -> Result<DecisionOutcome, Error> {
    let base = compute_apsp(graph);
    sweep(graph, &base, k, t, None)
}

/// [`greedy_decide`] over a precomputed base matrix of `graph`. The matrix is
/// cloned; neither input is modified.
pub fn greedy_decide_with_base(
    graph: &MetricGraph,
    base: &ApspMatrix,
    k: usize,
    t: f64,
) -> Result<DecisionOutcome, Error> {
    sweep(graph, base, k, t, None)
}

/// Same sweep as [`greedy_decide`], additionally logging every examined
/// candidate with its graph distance and the accept/reject decision.
pub fn greedy_trace(
    graph: &MetricGraph,
    k: usize,
    t: f64,
) -> Result<(DecisionOutcome, Vec<TraceEntry>), Error> {
    let base = compute_apsp(graph);
    let mut log = Vec::new();
    let outcome = sweep(graph, &base, k, t, Some(&mut log))?;
    Ok((outcome, log))
}
