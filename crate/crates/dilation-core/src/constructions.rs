//! Deterministic generators for the two adversarial families.
//!
//! The greedy family is a comb-shaped path on `6k + 3` vertices where the
//! shortest profitable edges lure the decision sweep into `k` useless
//! additions before the one that matters, forcing NO at any threshold up to
//! `(1 - eps)(k + 1) t*`. The bottleneck family is a zig-zag path on
//! `2k + 3` vertices whose `k + 1` extreme-dilation pairs trick the
//! bottleneck heuristic into a dilation `2^k` times optimal.

use std::collections::BTreeMap;

use crate::metric::{MetricGraph, MetricSpace};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    GreedyLb,
    BottleneckLb,
}

/// Parameters for one adversarial instance.
#[derive(Debug, Clone, Copy)]
pub struct ConstructionSpec {
    pub family: Family,
    pub k: usize,
    /// Vertical scale.
    pub h: f64,
    /// Secondary offset, greedy family only; defaults to `h * 1e-4`.
    pub h_prime: Option<f64>,
    /// Force the bottleneck pick order without tie-breaking; bottleneck
    /// family only.
    pub perturb: bool,
}

impl ConstructionSpec {
    pub fn greedy_lb(k: usize, h: f64) -> Self {
        ConstructionSpec {
            family: Family::GreedyLb,
            k,
            h,
            h_prime: None,
            perturb: false,
        }
    }

    pub fn bottleneck_lb(k: usize, h: f64, perturb: bool) -> Self {
        ConstructionSpec {
            family: Family::BottleneckLb,
            k,
            h,
            h_prime: None,
            perturb,
        }
    }

    pub fn generate(&self) -> Result<Construction, Error> {
        match self.family {
            Family::GreedyLb => {
                gen_greedy_lb(self.k, self.h, self.h_prime.unwrap_or(self.h * 1e-4))
            }
            Family::BottleneckLb => gen_bottleneck_lb(self.k, self.h, self.perturb),
        }
    }
}

/// A generated instance with its vertex labels, the closed-form optimal
/// dilation, and the known-optimal edge set.
#[derive(Debug, Clone)]
pub struct Construction {
    pub graph: MetricGraph,
    pub labels: BTreeMap<String, usize>,
    pub t_star_formula: f64,
    pub optimal_edges: Vec<(usize, usize)>,
}

/// Relative gap shrink applied to the first forced pair when perturbing the
/// bottleneck family; each later pair gets half the previous shrink.
const PERTURB_SHRINK: f64 = 1e-3;

fn path_graph(points: Vec<Vec<f64>>) -> Result<MetricGraph, Error> {
    let n = points.len();
    let space = MetricSpace::euclidean(points)?;
    let graph = MetricGraph::new(space, (0..n - 1).map(|i| (i, i + 1)))?;
    Ok(graph)
}

/// Lower-bound family for the greedy decision procedure. Vertices follow the
/// path order `a1, b1, c1, d1, e1, f1, g1, b2, ..., f_k, g_k, y1, z1`; the
/// optimal edges are the `(b_i, g_i)` rungs and the optimal dilation is
/// `(2 + (4k - 3) h) / h`, attained by `(a1, z1)`.
///
/// Requires `k >= 2`: at `k = 1` the formulas place `y1` and `z1` on the same
/// point and the instance degenerates.
pub fn gen_greedy_lb(k: usize, h: f64, h_prime: f64) -> Result<Construction, Error> {
    if k < 2 {
        return Err(Error::Construction(format!(
            "k must be at least 2 (k = 1 makes y1 and z1 coincide), got {k}"
        )));
    }
    if !(h.is_finite() && h > 0.0 && h < 1.0 / k as f64) {
        return Err(Error::Construction(format!(
            "h must satisfy 0 < h < 1/k, got h = {h} for k = {k}"
        )));
    }
    if !(h_prime.is_finite() && h_prime > 0.0 && h_prime < h) {
        return Err(Error::Construction(format!(
            "h_prime must satisfy 0 < h_prime < h, got h_prime = {h_prime}, h = {h}"
        )));
    }
    let kf = k as f64;
    let mut points = Vec::with_capacity(6 * k + 3);
    let mut labels = BTreeMap::new();
    let push = |labels: &mut BTreeMap<String, usize>,
                points: &mut Vec<Vec<f64>>,
                name: String,
                x: f64,
                y: f64| {
        labels.insert(name, points.len());
        points.push(vec![x, y]);
    };
    push(&mut labels, &mut points, "a1".into(), 0.0, 2.0 * h);
    for i in 1..=k {
        let fi = i as f64;
        push(&mut labels, &mut points, format!("b{i}"), 1.0, 2.0 * fi * h);
        push(&mut labels, &mut points, format!("c{i}"), 2.0, 2.0 * fi * h);
        push(
            &mut labels,
            &mut points,
            format!("d{i}"),
            kf + 3.0 + fi,
            2.0 * fi * h,
        );
        push(
            &mut labels,
            &mut points,
            format!("e{i}"),
            kf + 3.0 + fi,
            (2.0 * fi + 1.0) * h,
        );
        push(
            &mut labels,
            &mut points,
            format!("f{i}"),
            2.0,
            (2.0 * fi + 1.0) * h - h_prime,
        );
        push(
            &mut labels,
            &mut points,
            format!("g{i}"),
            1.0,
            (2.0 * fi + 1.0) * h,
        );
    }
    push(
        &mut labels,
        &mut points,
        "y1".into(),
        0.0,
        (2.0 * kf + 1.0) * h,
    );
    push(&mut labels, &mut points, "z1".into(), 0.0, 3.0 * h);

    let optimal_edges = (1..=k)
        .map(|i| (labels[&format!("b{i}")], labels[&format!("g{i}")]))
        .collect();
    Ok(Construction {
        graph: path_graph(points)?,
        labels,
        t_star_formula: (2.0 + (4.0 * kf - 3.0) * h) / h,
        optimal_edges,
    })
}

/// Lower-bound family for the bottleneck heuristic. Vertices follow the path
/// order `x0, y1, z1, y2, z2, ..., y_k, z_k, y_{k+1}, x1`; the optimal edges
/// are the `(y_i, y_{i+1})` ladder and the optimal dilation is
/// `sqrt(1 + h^2) / (2^k h)`.
///
/// Every pair `(x0, x1)` and `(y_i, y_{i+1})` starts at dilation
/// `sqrt(1 + h^2) / h`. With `perturb` set, each pair in the forced pick
/// order — `(x0, x1)`, then `(y_k, y_{k+1})` down to `(y_2, y_3)` — is drawn
/// together by a geometrically decreasing relative amount (1e-3, 5e-4, ...),
/// realised as telescoped vertical offsets so neighbouring pairs keep their
/// own gaps. That makes the bottleneck pick order strict without adversarial
/// tie-breaking, and leaves `(y_1, y_2)` exactly at the unperturbed dilation.
pub fn gen_bottleneck_lb(k: usize, h: f64, perturb: bool) -> Result<Construction, Error> {
    if k == 0 {
        return Err(Error::ZeroBudget);
    }
    if !(h.is_finite() && h > 0.0 && h < 1.0) {
        return Err(Error::Construction(format!(
            "h must satisfy 0 < h < 1, got {h}"
        )));
    }
    let pow = |i: usize| (1u64 << i) as f64;

    // Vertical offsets solving for the target per-pair gap shrinks.
    let mut x_delta = 0.0;
    let mut y_offset = vec![0.0; k + 2]; // 1-based y index
    if perturb {
        x_delta = pow(k + 1) * h * PERTURB_SHRINK / 2.0;
        for a in 2..=k {
            let shrink = PERTURB_SHRINK / pow(k - a + 1);
            y_offset[a + 1] = y_offset[a] - pow(a) * h * shrink;
        }
    }

    let mut points = Vec::with_capacity(2 * k + 3);
    let mut labels = BTreeMap::new();
    labels.insert("x0".to_string(), points.len());
    points.push(vec![-1.0, h + x_delta]);
    for (i, &offset) in y_offset.iter().enumerate().take(k + 1).skip(1) {
        labels.insert(format!("y{i}"), points.len());
        points.push(vec![0.0, pow(i) * h + offset]);
        labels.insert(format!("z{i}"), points.len());
        points.push(vec![pow(i - 1), 3.0 * pow(i - 1) * h]);
    }
    labels.insert(format!("y{}", k + 1), points.len());
    points.push(vec![0.0, pow(k + 1) * h + y_offset[k + 1]]);
    labels.insert("x1".to_string(), points.len());
    points.push(vec![-1.0, pow(k + 1) * h + h - x_delta]);

    let optimal_edges = (1..=k)
        .map(|i| (labels[&format!("y{i}")], labels[&format!("y{}", i + 1)]))
        .collect();
    Ok(Construction {
        graph: path_graph(points)?,
        labels,
        t_star_formula: (1.0 + h * h).sqrt() / (pow(k) * h),
        optimal_edges,
    })
}

/// The pick order [`gen_bottleneck_lb`] forces with `perturb`: first
/// `(x0, x1)`, then `(y_{k-i+2}, y_{k-i+3})` for the i-th pick.
pub fn bottleneck_forced_order(k: usize) -> Vec<(usize, usize)> {
    let y = |i: usize| 2 * i - 1;
    let mut order = vec![(0, 2 * k + 2)];
    for i in 2..=k {
        order.push((y(k - i + 2), y(k - i + 3)));
    }
    order
}
