//! Brute-force exact solver: enumerate every k-subset of non-edges.
//!
//! Ground truth for small instances. Evaluation shares matrix work along a
//! DFS prefix stack (one `insert_edge` per tree node) and fuses the last
//! level into a scan that needs no matrix clone. Enumeration is partitioned
//! across workers by the first chosen candidate and reduced by minimum.

use rayon::prelude::*;

use crate::apsp::{compute_apsp, ApspMatrix};
use crate::metric::{EdgeCandidate, MetricGraph, MetricSpace};
use crate::Error;

/// Default bound on the number of enumerated subsets.
pub const DEFAULT_SUBSET_CAP: u64 = 2_000_000;

/// An exact optimum: the minimising edge set and its dilation.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub edges: Vec<EdgeCandidate>,
    pub t_star: f64,
    pub subsets_evaluated: u64,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Candidate order for enumeration and for tie-breaking between equally good
/// subsets: ascending `(u, v)`.
fn candidates_lex(graph: &MetricGraph) -> Vec<EdgeCandidate> {
    let n = graph.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !graph.has_edge(u, v) {
                out.push(EdgeCandidate::new(u, v, graph.edge_len(u, v)));
            }
        }
    }
    out
}

struct Best {
    t: f64,
    subset: Vec<usize>,
}

impl Best {
    fn offer(&mut self, t: f64, subset: &[usize]) {
        // An empty subset means no candidate yet; it must lose to any offer,
        // including an infinite one on instances no k-subset can connect.
        let unset = self.subset.is_empty();
        if t < self.t || (t == self.t && (unset || subset < self.subset.as_slice())) {
            self.t = t;
            self.subset = subset.to_vec();
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.offer(other.t, &other.subset);
        self
    }
}

struct Enumeration<'a> {
    cands: &'a [EdgeCandidate],
    space: &'a MetricSpace,
}

impl Enumeration<'_> {
    fn dfs(
        &self,
        matrix: &ApspMatrix,
        start: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        best: &mut Best,
        evaluated: &mut u64,
    ) {
        if remaining == 1 {
            for (i, c) in self.cands.iter().enumerate().skip(start) {
                let (t, _) = matrix.dilation_with_extra_edge(self.space, c.u, c.v, c.length);
                *evaluated += 1;
                chosen.push(i);
                best.offer(t, chosen);
                chosen.pop();
            }
            return;
        }
        for i in start..=self.cands.len() - remaining {
            let c = self.cands[i];
            let mut next = matrix.clone();
            next.insert_edge(c.u, c.v, c.length);
            chosen.push(i);
            self.dfs(&next, i + 1, remaining - 1, chosen, best, evaluated);
            chosen.pop();
        }
    }
}

/// Exactly solve the budget-`k` augmentation problem by enumerating all
/// k-subsets of non-edges, refusing when more than `cap` subsets would be
/// needed. Ties between minimisers resolve to the lexicographically first
/// subset in `(u, v)` candidate order. When fewer than `k` non-edges exist,
/// all of them are returned.
pub fn exact_optimal(graph: &MetricGraph, k: usize, cap: u64) -> Result<OracleSolution, Error> {
    if k == 0 {
        return Err(Error::ZeroBudget);
    }
    let cands = candidates_lex(graph);
    let space = graph.space();
    let base = compute_apsp(graph);

    if cands.len() <= k {
        let mut matrix = base;
        for c in &cands {
            matrix.insert_edge(c.u, c.v, c.length);
        }
        let (t_star, _) = matrix.dilation(space);
        return Ok(OracleSolution {
            edges: cands,
            t_star,
            subsets_evaluated: 1,
        });
    }

    let subsets = binomial(cands.len(), k);
    if subsets > cap as u128 {
        return Err(Error::OracleCapExceeded { subsets, cap });
    }

    let results: Vec<(Best, u64)> = (0..=cands.len() - k)
        .into_par_iter()
        .map(|first| {
            let mut best = Best {
                t: f64::INFINITY,
                subset: Vec::new(),
            };
            let mut evaluated = 0u64;
            let mut chosen = vec![first];
            if k == 1 {
                let c = cands[first];
                let (t, _) = base.dilation_with_extra_edge(space, c.u, c.v, c.length);
                evaluated = 1;
                best.offer(t, &chosen);
            } else {
                let c = cands[first];
                let mut matrix = base.clone();
                matrix.insert_edge(c.u, c.v, c.length);
                let enumeration = Enumeration {
                    cands: &cands,
                    space,
                };
                enumeration.dfs(
                    &matrix,
                    first + 1,
                    k - 1,
                    &mut chosen,
                    &mut best,
                    &mut evaluated,
                );
            }
            (best, evaluated)
        })
        .collect();

    let mut total = 0u64;
    let mut best = Best {
        t: f64::INFINITY,
        subset: Vec::new(),
    };
    for (b, e) in results {
        best = best.merge(b);
        total += e;
    }
    Ok(OracleSolution {
        edges: best.subset.iter().map(|&i| cands[i]).collect(),
        t_star: best.t,
        subsets_evaluated: total,
    })
}

/// Does `t* <= t` hold? Exact comparison against [`exact_optimal`].
pub fn exact_decide(graph: &MetricGraph, k: usize, t: f64, cap: u64) -> Result<bool, Error> {
    Ok(exact_optimal(graph, k, cap)?.t_star <= t)
}
