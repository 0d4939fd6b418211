//! All-pairs shortest-path distances with O(n^2) single-edge insertion.
//!
//! [`compute_apsp`] runs one binary-heap Dijkstra pass per source vertex.
//! [`ApspMatrix::insert_edge`] updates every pair `(u, v)` with the minimum of
//! the old distance and the two detours through the new edge, so a decision
//! sweep can maintain exact distances across up to `k + 1` insertions without
//! recomputing.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;

use crate::metric::{MetricGraph, MetricSpace};

/// Dense symmetric matrix of shortest-path lengths. Disconnected pairs hold
/// `f64::INFINITY`; the insertion formula is infinity-safe.
#[derive(Debug, Clone)]
pub struct ApspMatrix {
    n: usize,
    dist: Vec<f64>,
    fingerprint: u64,
    revision: u64,
}

struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    // Reversed on distance so the std max-heap pops the closest node first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.node.cmp(&self.node))
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, w) in &adj[node] {
            let candidate = d + w;
            if candidate < dist[next] {
                dist[next] = candidate;
                heap.push(HeapEntry {
                    dist: candidate,
                    node: next,
                });
            }
        }
    }
    dist
}

fn graph_fingerprint(graph: &MetricGraph) -> u64 {
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    graph.n().hash(&mut hasher);
    match graph.space() {
        MetricSpace::Euclidean { points } => {
            0u8.hash(&mut hasher);
            for p in points {
                for c in p {
                    c.to_bits().hash(&mut hasher);
                }
            }
        }
        MetricSpace::Matrix { d } => {
            1u8.hash(&mut hasher);
            for row in d {
                for c in row {
                    c.to_bits().hash(&mut hasher);
                }
            }
        }
    }
    for (u, v) in graph.edges() {
        (u, v).hash(&mut hasher);
    }
    hasher.finish()
}

/// Shortest-path matrix of `graph`: one Dijkstra pass per source, run in
/// parallel. Rows are symmetrised with a pairwise min so the matrix is
/// bitwise symmetric.
pub fn compute_apsp(graph: &MetricGraph) -> ApspMatrix {
    let n = graph.n();
    let adj = graph.adjacency();
    let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|s| dijkstra(&adj, s)).collect();
    let mut dist = vec![0.0; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let d = rows[u][v].min(rows[v][u]);
            dist[u * n + v] = d;
            dist[v * n + u] = d;
        }
    }
    ApspMatrix {
        n,
        dist,
        fingerprint: graph_fingerprint(graph),
        revision: 0,
    }
}

impl ApspMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Fingerprint of the source graph the matrix was computed from.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Number of edge insertions applied since [`compute_apsp`].
    pub fn revision(&self) -> u64 {
        self.revision
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    pub fn is_connected(&self) -> bool {
        self.dist[..self.n].iter().all(|d| d.is_finite())
    }

    /// Fold the edge `(p, q)` of length `len` into the matrix: every pair
    /// takes the minimum of its old distance and the two routes through the
    /// new edge. O(n^2), O(1) per pair. Rows `p` and `q` are snapshotted
    /// first, so every candidate uses pre-insertion distances regardless of
    /// visit order.
    pub fn insert_edge(&mut self, p: usize, q: usize, len: f64) {
        let n = self.n;
        debug_assert!(p < n && q < n && p != q);
        let row_p: Vec<f64> = self.dist[p * n..(p + 1) * n].to_vec();
        let row_q: Vec<f64> = self.dist[q * n..(q + 1) * n].to_vec();
        let via_p: Vec<f64> = row_p.iter().map(|d| d + len).collect();
        let via_q: Vec<f64> = row_q.iter().map(|d| d + len).collect();
        for u in 0..n {
            let row = u * n;
            for v in u + 1..n {
                let old = self.dist[row + v];
                let candidate = (via_p[u] + row_q[v]).min(via_q[u] + row_p[v]);
                if candidate < old {
                    self.dist[row + v] = candidate;
                    self.dist[v * n + u] = candidate;
                }
            }
        }
        self.revision += 1;
    }

    /// Maximum of `dist(u, v) / d_M(u, v)` over distinct pairs, with the
    /// attaining pair. Ties break toward the lexicographically smallest pair.
    /// A disconnected graph yields infinity with its first disconnected pair.
    pub fn dilation(&self, space: &MetricSpace) -> (f64, (usize, usize)) {
        let n = self.n;
        debug_assert_eq!(space.n(), n);
        let mut best = f64::NEG_INFINITY;
        let mut pair = (0, 1);
        for u in 0..n {
            for v in u + 1..n {
                let d = self.get(u, v);
                if !d.is_finite() {
                    return (f64::INFINITY, (u, v));
                }
                let ratio = d / space.dist(u, v);
                if ratio > best {
                    best = ratio;
                    pair = (u, v);
                }
            }
        }
        (best, pair)
    }

    /// Dilation of the graph with one extra edge `(p, q)` of length `len`,
    /// evaluated on the fly without materialising the updated matrix.
    /// Produces the same value and argmax pair as `insert_edge` followed by
    /// `dilation`.
    pub fn dilation_with_extra_edge(
        &self,
        space: &MetricSpace,
        p: usize,
        q: usize,
        len: f64,
    ) -> (f64, (usize, usize)) {
        let n = self.n;
        let mut best = f64::NEG_INFINITY;
        let mut pair = (0, 1);
        for u in 0..n {
            let via_p_u = self.get(u, p) + len;
            let via_q_u = self.get(u, q) + len;
            for v in u + 1..n {
                let old = self.get(u, v);
                let candidate = (via_p_u + self.get(q, v)).min(via_q_u + self.get(p, v));
                let d = if candidate < old { candidate } else { old };
                if !d.is_finite() {
                    return (f64::INFINITY, (u, v));
                }
                let ratio = d / space.dist(u, v);
                if ratio > best {
                    best = ratio;
                    pair = (u, v);
                }
            }
        }
        (best, pair)
    }
}
