//! Metric spaces, metric graphs and edge candidates.
//!
//! A [`MetricSpace`] supplies the pairwise distance `d_M(u, v)`, either from
//! point coordinates (Euclidean) or from an explicit symmetric distance
//! matrix. A [`MetricGraph`] is a vertex set plus an undirected edge set over
//! such a space; edge weights are always derived from the space, never stored.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Relative tolerance for matrix symmetry checks.
const SYM_TOL: f64 = 1e-12;
/// Relative slack allowed on triangle-inequality checks in strict mode.
const TRIANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("metric space needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("point {index} has dimension {got}, expected {expected}")]
    RaggedPoints {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("distance matrix row {index} has length {got}, expected {expected}")]
    RaggedMatrix {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("edge ({0}, {0}) is a self-loop")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
}

/// Source of the metric distance `d_M(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpace {
    /// Points in d-dimensional Euclidean space.
    Euclidean { points: Vec<Vec<f64>> },
    /// Explicit n x n distance matrix.
    Matrix { d: Vec<Vec<f64>> },
}

/// A single invariant violation found by [`MetricSpace::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite {
        u: usize,
        v: usize,
    },
    Asymmetric {
        u: usize,
        v: usize,
    },
    Negative {
        u: usize,
        v: usize,
    },
    NonzeroDiagonal {
        u: usize,
    },
    ZeroDistance {
        u: usize,
        v: usize,
    },
    /// `d(u, w) > (d(u, v) + d(v, w)) * (1 + 1e-9)`.
    Triangle {
        u: usize,
        v: usize,
        w: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { u, v } => write!(f, "non-finite distance at ({u}, {v})"),
            Violation::Asymmetric { u, v } => write!(f, "asymmetric entries at ({u}, {v})"),
            Violation::Negative { u, v } => write!(f, "negative distance at ({u}, {v})"),
            Violation::NonzeroDiagonal { u } => write!(f, "nonzero diagonal at ({u}, {u})"),
            Violation::ZeroDistance { u, v } => {
                write!(f, "zero distance between distinct vertices ({u}, {v})")
            }
            Violation::Triangle { u, v, w } => {
                write!(
                    f,
                    "triangle inequality violated: d({u},{w}) > d({u},{v}) + d({v},{w})"
                )
            }
        }
    }
}

impl MetricSpace {
    /// Build a Euclidean space from point coordinates. Checks shape only;
    /// value-level invariants are reported by [`MetricSpace::validate`].
    pub fn euclidean(points: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        if points.len() < 2 {
            return Err(MetricError::TooFewVertices(points.len()));
        }
        let dim = points[0].len();
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(MetricError::RaggedPoints {
                    index,
                    got: p.len(),
                    expected: dim,
                });
            }
        }
        Ok(MetricSpace::Euclidean { points })
    }

    /// Build a space from an explicit distance matrix. Checks shape only.
    pub fn matrix(d: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let n = d.len();
        if n < 2 {
            return Err(MetricError::TooFewVertices(n));
        }
        for (index, row) in d.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::RaggedMatrix {
                    index,
                    got: row.len(),
                    expected: n,
                });
            }
        }
        Ok(MetricSpace::Matrix { d })
    }

    pub fn n(&self) -> usize {
        match self {
            MetricSpace::Euclidean { points } => points.len(),
            MetricSpace::Matrix { d } => d.len(),
        }
    }

    /// `d_M(u, v)`. Symmetric in its arguments by construction: the matrix
    /// variant reads the canonical `(min, max)` entry. Panics on out-of-range
    /// indices; use [`MetricSpace::edge_length`] for checked access.
    pub fn dist(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return 0.0;
        }
        match self {
            MetricSpace::Euclidean { points } => {
                let (a, b) = (&points[u], &points[v]);
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            }
            MetricSpace::Matrix { d } => {
                let (lo, hi) = if u < v { (u, v) } else { (v, u) };
                d[lo][hi]
            }
        }
    }

    /// Checked distance between two distinct vertices.
    pub fn edge_length(&self, u: usize, v: usize) -> Result<f64, MetricError> {
        let n = self.n();
        for index in [u, v] {
            if index >= n {
                return Err(MetricError::VertexOutOfRange { index, n });
            }
        }
        if u == v {
            return Err(MetricError::SelfLoop(u));
        }
        Ok(self.dist(u, v))
    }

    /// Report every violated invariant. With `strict` set, matrix inputs are
    /// additionally checked for the triangle inequality.
    pub fn validate(&self, strict: bool) -> Vec<Violation> {
        let mut report = Vec::new();
        let n = self.n();
        match self {
            MetricSpace::Euclidean { points } => {
                for (u, p) in points.iter().enumerate() {
                    if p.iter().any(|c| !c.is_finite()) {
                        report.push(Violation::NonFinite { u, v: u });
                    }
                }
                for u in 0..n {
                    for v in u + 1..n {
                        if self.dist(u, v) == 0.0 {
                            report.push(Violation::ZeroDistance { u, v });
                        }
                    }
                }
            }
            MetricSpace::Matrix { d } => {
                for (u, row) in d.iter().enumerate() {
                    if row[u] != 0.0 {
                        report.push(Violation::NonzeroDiagonal { u });
                    }
                    for (v, &a) in row.iter().enumerate().skip(u + 1) {
                        let b = d[v][u];
                        if !a.is_finite() || !b.is_finite() {
                            report.push(Violation::NonFinite { u, v });
                            continue;
                        }
                        if (a - b).abs() > SYM_TOL * a.abs().max(b.abs()) {
                            report.push(Violation::Asymmetric { u, v });
                        }
                        if a < 0.0 || b < 0.0 {
                            report.push(Violation::Negative { u, v });
                        } else if a == 0.0 && b == 0.0 {
                            report.push(Violation::ZeroDistance { u, v });
                        }
                    }
                }
                if strict && report.is_empty() {
                    for u in 0..n {
                        for w in u + 1..n {
                            for v in 0..n {
                                if v == u || v == w {
                                    continue;
                                }
                                let direct = self.dist(u, w);
                                let detour = self.dist(u, v) + self.dist(v, w);
                                if direct > detour * (1.0 + TRIANGLE_TOL) {
                                    report.push(Violation::Triangle { u, v, w });
                                    break;
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }
}

/// A candidate edge with canonical `u < v` endpoint order and its metric
/// length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCandidate {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

impl EdgeCandidate {
    pub fn new(u: usize, v: usize, length: f64) -> Self {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        EdgeCandidate { u, v, length }
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

/// An undirected graph over a metric space. Edge weights equal the metric
/// distance of their endpoints.
#[derive(Debug, Clone)]
pub struct MetricGraph {
    space: MetricSpace,
    edges: BTreeSet<(usize, usize)>,
}

impl MetricGraph {
    /// Build a graph. Edges are canonicalised to `u < v`; self-loops,
    /// out-of-range endpoints and duplicates are rejected.
    pub fn new(
        space: MetricSpace,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MetricError> {
        let n = space.n();
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for index in [u, v] {
                if index >= n {
                    return Err(MetricError::VertexOutOfRange { index, n });
                }
            }
            if u == v {
                return Err(MetricError::SelfLoop(u));
            }
            let e = if u < v { (u, v) } else { (v, u) };
            if !set.insert(e) {
                return Err(MetricError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(MetricGraph { space, edges: set })
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    /// Edges in canonical `(u, v)` lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&e)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edges.len() == n * (n - 1) / 2
    }

    /// Metric length of the pair `(u, v)`; panics on out-of-range indices.
    pub fn edge_len(&self, u: usize, v: usize) -> f64 {
        self.space.dist(u, v)
    }

    /// Clone the graph with extra edges added.
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<Self, MetricError> {
        let all = self.edges().chain(extra.iter().copied());
        MetricGraph::new(self.space.clone(), all)
    }

    /// Adjacency lists with derived weights.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(u, v) in &self.edges {
            let w = self.space.dist(u, v);
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }

    pub fn component_count(&self) -> usize {
        let n = self.n();
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut components = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &(v, _) in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        components
    }

    /// All vertex pairs without an edge, sorted by `(length, u, v)`.
    pub fn non_edges_sorted(&self) -> Vec<EdgeCandidate> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * (n - 1) / 2 - self.edges.len());
        for u in 0..n {
            for v in u + 1..n {
                if !self.edges.contains(&(u, v)) {
                    out.push(EdgeCandidate::new(u, v, self.space.dist(u, v)));
                }
            }
        }
        out.sort_by(|a, b| {
            a.length
                .total_cmp(&b.length)
                .then(a.u.cmp(&b.u))
                .then(a.v.cmp(&b.v))
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_matrix() -> MetricSpace {
        MetricSpace::matrix(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap()
    }

    #[test]
    fn edge_length_345_triangle() {
        let s = MetricSpace::euclidean(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(s.edge_length(0, 1).unwrap(), 5.0);
    }

    #[test]
    fn edge_length_matrix_lookup() {
        assert_eq!(unit_matrix().edge_length(0, 1).unwrap(), 2.0);
    }

    #[test]
    fn edge_length_greedy_family_rung() {
        // b_1 = (1, 2h) and a_1 = (0, 2h) sit at unit horizontal distance.
        let h = 0.01;
        let s = MetricSpace::euclidean(vec![vec![0.0, 2.0 * h], vec![1.0, 2.0 * h]]).unwrap();
        assert_eq!(s.edge_length(0, 1).unwrap(), 1.0);
    }

    #[test]
    fn edge_length_rejects_bad_indices() {
        let s = unit_matrix();
        assert!(matches!(
            s.edge_length(0, 2),
            Err(MetricError::VertexOutOfRange { index: 2, n: 2 })
        ));
        assert!(matches!(s.edge_length(1, 1), Err(MetricError::SelfLoop(1))));
    }

    #[test]
    fn validate_clean_matrix() {
        assert!(MetricSpace::matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]])
            .unwrap()
            .validate(false)
            .is_empty());
    }

    #[test]
    fn validate_flags_asymmetry() {
        let s = MetricSpace::matrix(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(
            s.validate(false),
            vec![Violation::Asymmetric { u: 0, v: 1 }]
        );
    }

    #[test]
    fn validate_strict_flags_triangle() {
        let s = MetricSpace::matrix(vec![
            vec![0.0, 1.0, 10.0],
            vec![1.0, 0.0, 1.0],
            vec![10.0, 1.0, 0.0],
        ])
        .unwrap();
        let report = s.validate(true);
        assert_eq!(report.len(), 1);
        assert!(matches!(
            report[0],
            Violation::Triangle { u: 0, v: 1, w: 2 }
        ));
        // Non-strict accepts the same matrix.
        assert!(s.validate(false).is_empty());
    }

    #[test]
    fn validate_flags_duplicate_points() {
        let s = MetricSpace::euclidean(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(
            s.validate(false),
            vec![Violation::ZeroDistance { u: 0, v: 1 }]
        );
    }

    #[test]
    fn non_edges_of_complete_graph_empty() {
        let s = unit_matrix();
        let g = MetricGraph::new(s, [(0, 1)]).unwrap();
        assert!(g.non_edges_sorted().is_empty());
        assert!(g.is_complete());
    }

    #[test]
    fn non_edges_sorted_by_length() {
        let s =
            MetricSpace::euclidean(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let g = MetricGraph::new(s, [(0, 1)]).unwrap();
        let ne = g.non_edges_sorted();
        assert_eq!(ne.len(), 2);
        assert_eq!((ne[0].pair(), ne[0].length), ((1, 2), 1.0));
        assert_eq!((ne[1].pair(), ne[1].length), ((0, 2), 2.0));
    }

    #[test]
    fn non_edges_tie_breaks_lexicographically() {
        // Unit square: the two diagonals tie, (0, 3) must precede (1, 2)
        // once indices are laid out so both have equal length.
        let s = MetricSpace::euclidean(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .unwrap();
        let g = MetricGraph::new(s, [(0, 1), (2, 3), (0, 2), (1, 3)]).unwrap();
        let ne = g.non_edges_sorted();
        assert_eq!(ne.len(), 2);
        assert_eq!(ne[0].pair(), (0, 3));
        assert_eq!(ne[1].pair(), (1, 2));
        assert_eq!(ne[0].length, ne[1].length);
    }

    #[test]
    fn graph_rejects_duplicates_and_loops() {
        let s = MetricSpace::euclidean(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert!(matches!(
            MetricGraph::new(s.clone(), [(0, 1), (1, 0)]),
            Err(MetricError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            MetricGraph::new(s, [(2, 2)]),
            Err(MetricError::SelfLoop(2))
        ));
    }

    proptest! {
        #[test]
        fn dist_is_symmetric(coords in proptest::collection::vec(
            proptest::collection::vec(-100.0f64..100.0, 3), 2..8))
        {
            let s = MetricSpace::euclidean(coords).unwrap();
            let n = s.n();
            for u in 0..n {
                for v in 0..n {
                    prop_assert_eq!(s.dist(u, v), s.dist(v, u));
                }
            }
        }

        #[test]
        fn euclidean_triangle_inequality(coords in proptest::collection::vec(
            proptest::collection::vec(-100.0f64..100.0, 2), 3..9))
        {
            let s = MetricSpace::euclidean(coords).unwrap();
            let n = s.n();
            for u in 0..n {
                for v in 0..n {
                    for w in 0..n {
                        let direct = s.dist(u, w);
                        let detour = s.dist(u, v) + s.dist(v, w);
                        prop_assert!(direct <= detour * (1.0 + 1e-12) + 1e-12);
                    }
                }
            }
        }

        #[test]
        fn non_edges_count_and_order(n in 3usize..8, mask in proptest::collection::vec(any::<bool>(), 28)) {
            let points: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64, (i * i) as f64 * 0.25]).collect();
            let s = MetricSpace::euclidean(points).unwrap();
            let mut edges = Vec::new();
            let mut idx = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask[idx % mask.len()] {
                        edges.push((u, v));
                    }
                    idx += 1;
                }
            }
            let g = MetricGraph::new(s, edges.iter().copied()).unwrap();
            let ne = g.non_edges_sorted();
            prop_assert_eq!(ne.len(), n * (n - 1) / 2 - edges.len());
            for w in ne.windows(2) {
                let key_a = (w[0].length, w[0].u, w[0].v);
                let key_b = (w[1].length, w[1].u, w[1].v);
                prop_assert!(key_a < key_b);
            }
        }
    }
}
