//! Improve the dilation (stretch factor) of a metric graph by adding at most
//! `k` edges.
//!
//! The centrepiece is a budgeted greedy decision procedure
//! ([`greedy::greedy_decide`]): sweep the non-edges by increasing length, add
//! any edge whose current graph distance exceeds `t` times its metric length,
//! and stop after `k + 1` additions. A YES answer certifies `t* <= t`, a NO
//! answer certifies `t* > t / (k + 1)`, where `t*` is the best dilation
//! reachable with `k` added edges. [`search::augment`] turns that procedure
//! into a `(1 + eps)(k + 1)`-approximation via rank selection over the
//! pairwise-distance ratio set, a three-case coarse binary search, and an
//! eps-grid refinement.
//!
//! Also here: the bottleneck-edge baseline ([`bottleneck::bottleneck_augment`]),
//! generators for the two adversarial families that pin down both algorithms'
//! worst cases ([`constructions`]), and a brute-force exact solver used as
//! ground truth on small instances ([`oracle`]).
//!
//! Guarantees are stated for metric inputs (every connected metric graph has
//! dilation at least 1). Distance-matrix inputs that break the triangle
//! inequality are accepted and processed, but the approximation bounds are
//! only meaningful when `t* >= 1`.

pub mod apsp;
pub mod bottleneck;
pub mod constructions;
pub mod greedy;
pub mod io;
pub mod metric;
pub mod oracle;
pub mod search;

pub use apsp::{compute_apsp, ApspMatrix};
pub use bottleneck::bottleneck_augment;
pub use constructions::{gen_bottleneck_lb, gen_greedy_lb, Construction, ConstructionSpec, Family};
pub use greedy::{greedy_decide, greedy_trace, DecisionOutcome, TraceEntry, Verdict};
pub use metric::{EdgeCandidate, MetricError, MetricGraph, MetricSpace, Violation};
pub use oracle::{exact_decide, exact_optimal, OracleSolution, DEFAULT_SUBSET_CAP};
pub use search::{
    augment, coarse_search, mst_edges, refine_search, select_xy, AugmentationResult, RatioSpace,
    SearchInterval,
};

use thiserror::Error;

/// Relative tolerance for all dilation comparisons.
pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("decision threshold must exceed 1, got {0} (dilation 1 is only achievable by the complete graph; test completeness directly)")]
    ThresholdTooLow(f64),
    #[error("edge budget must be at least 1")]
    ZeroBudget,
    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),
    #[error("selection rank {rank} out of range 1..={max}")]
    RankOutOfRange { rank: u64, max: u64 },
    #[error("degenerate search interval [{t_lo}, {t_hi}]")]
    DegenerateInterval { t_lo: f64, t_hi: f64 },
    #[error("graph has {components} connected components; adding {k} edges cannot connect it")]
    TooManyComponents { components: usize, k: usize },
    #[error("oracle refuses: {subsets} candidate subsets exceed the cap of {cap} (raise the cap to force the run)")]
    OracleCapExceeded { subsets: u128, cap: u64 },
    #[error("construction parameters: {0}")]
    Construction(String),
    #[error("search invariant violated: {0}")]
    SearchInvariant(String),
}
