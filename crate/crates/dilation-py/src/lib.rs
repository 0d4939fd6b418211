//! Python bindings: the `dilation_py` extension module.
//!
//! Exposes metric graphs and the main operations — dilation, the greedy
//! decision procedure, budgeted augmentation, the bottleneck baseline, the
//! brute-force oracle, the adversarial-family generators and X+Y selection.
//!
//! Build with `cargo build -p dilation-py --release`, then rename
//! `libdilation_py.so` to `dilation_py.so` somewhere on `sys.path`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dilation_core as core;
use dilation_core::io;

fn to_py_err(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn pairs(edges: &[core::EdgeCandidate]) -> Vec<(usize, usize)> {
    edges.iter().map(|e| e.pair()).collect()
}

fn verdict_str(v: core::Verdict) -> &'static str {
    match v {
        core::Verdict::Yes => "YES",
        core::Verdict::No => "NO",
    }
}

/// An undirected graph over a metric space; edge weights are the metric
/// distances of their endpoints.
#[pyclass(frozen)]
struct Graph {
    inner: core::MetricGraph,
}

#[pymethods]
impl Graph {
    /// Build from d-dimensional point coordinates and an edge list.
    #[staticmethod]
    #[pyo3(signature = (points, edges=vec![]))]
    fn euclidean(points: Vec<Vec<f64>>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let space = core::MetricSpace::euclidean(points).map_err(to_py_err)?;
        let inner = core::MetricGraph::new(space, edges).map_err(to_py_err)?;
        Ok(Graph { inner })
    }

    /// Build from an explicit symmetric distance matrix and an edge list.
    #[staticmethod]
    #[pyo3(signature = (d, edges=vec![]))]
    fn matrix(d: Vec<Vec<f64>>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let space = core::MetricSpace::matrix(d).map_err(to_py_err)?;
        let inner = core::MetricGraph::new(space, edges).map_err(to_py_err)?;
        Ok(Graph { inner })
    }

    /// Parse the canonical JSON graph format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = io::graph_from_json(text).map_err(to_py_err)?;
        Ok(Graph { inner })
    }

    /// Canonical JSON form.
    fn to_json(&self) -> String {
        io::graph_to_json(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn edge_length(&self, u: usize, v: usize) -> PyResult<f64> {
        self.inner.space().edge_length(u, v).map_err(to_py_err)
    }

    /// Invariant violations as strings; empty means valid. With `strict`,
    /// matrix inputs are also checked for the triangle inequality.
    #[pyo3(signature = (strict=false))]
    fn validate(&self, strict: bool) -> Vec<String> {
        self.inner
            .space()
            .validate(strict)
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    /// Non-edges sorted by (length, u, v), as (u, v, length) triples.
    fn non_edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .non_edges_sorted()
            .iter()
            .map(|e| (e.u, e.v, e.length))
            .collect()
    }

    /// Dilation and the attaining pair; infinite when disconnected.
    fn dilation(&self, py: Python<'_>) -> (f64, (usize, usize)) {
        py.detach(|| core::compute_apsp(&self.inner).dilation(self.inner.space()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, edges={})",
            self.inner.n(),
            self.inner.edge_count()
        )
    }
}

/// Greedy decision sweep: YES certifies t* <= t, NO certifies t* > t/(k+1).
#[pyfunction]
fn greedy_decide<'py>(
    py: Python<'py>,
    graph: &Graph,
    k: usize,
    t: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let outcome = py
        .detach(|| core::greedy_decide(&graph.inner, k, t))
        .map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("verdict", verdict_str(outcome.verdict))?;
    out.set_item("added_edges", pairs(&outcome.added_edges))?;
    out.set_item("final_dilation", outcome.final_dilation)?;
    out.set_item("processed_count", outcome.processed_count)?;
    Ok(out)
}

/// Add at most k edges with the (1+eps)(k+1) dilation guarantee.
#[pyfunction]
#[pyo3(signature = (graph, k, eps=0.1))]
fn augment<'py>(
    py: Python<'py>,
    graph: &Graph,
    k: usize,
    eps: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let result = py
        .detach(|| core::augment(&graph.inner, k, eps))
        .map_err(to_py_err)?;
    augmentation_dict(py, &result)
}

/// Bottleneck-edge baseline: k rounds of joining the max-dilation pair.
#[pyfunction]
fn bottleneck_augment<'py>(
    py: Python<'py>,
    graph: &Graph,
    k: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let result = py
        .detach(|| core::bottleneck_augment(&graph.inner, k))
        .map_err(to_py_err)?;
    augmentation_dict(py, &result)
}

fn augmentation_dict<'py>(
    py: Python<'py>,
    result: &core::AugmentationResult,
) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("edges", pairs(&result.edges))?;
    out.set_item("achieved_dilation", result.achieved_dilation)?;
    out.set_item("certified_factor", result.certified_factor)?;
    let trace: Vec<(f64, &'static str)> = result
        .grid_trace
        .iter()
        .map(|&(t, v)| (t, verdict_str(v)))
        .collect();
    out.set_item("grid_trace", trace)?;
    Ok(out)
}

/// Exact optimum by enumerating all k-subsets of non-edges (refuses beyond
/// `cap` subsets).
#[pyfunction]
#[pyo3(signature = (graph, k, cap=core::DEFAULT_SUBSET_CAP))]
fn exact_optimal<'py>(
    py: Python<'py>,
    graph: &Graph,
    k: usize,
    cap: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let sol = py
        .detach(|| core::exact_optimal(&graph.inner, k, cap))
        .map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("edges", pairs(&sol.edges))?;
    out.set_item("t_star", sol.t_star)?;
    out.set_item("subsets_evaluated", sol.subsets_evaluated)?;
    Ok(out)
}

/// Interval from the coarse three-case binary search, as (t_lo, t_hi).
#[pyfunction]
fn coarse_search(py: Python<'_>, graph: &Graph, k: usize) -> PyResult<(f64, f64)> {
    let interval = py
        .detach(|| core::coarse_search(&graph.inner, k))
        .map_err(to_py_err)?;
    Ok((interval.t_lo, interval.t_hi))
}

/// Minimum spanning tree of the complete metric graph, minus edges already
/// present.
#[pyfunction]
fn mst_edges(graph: &Graph) -> Vec<(usize, usize)> {
    let existing: Vec<(usize, usize)> = graph.inner.edges().collect();
    pairs(&core::mst_edges(graph.inner.space(), &existing))
}

/// i-th smallest (1-based) of the sum multiset {x + y} over two ascending
/// lists.
#[pyfunction]
fn select_xy(x: Vec<f64>, y: Vec<f64>, i: u64) -> PyResult<f64> {
    core::select_xy(&x, &y, i).map_err(to_py_err)
}

/// (graph, labels, t_star_formula, optimal_edges)
type ConstructionParts<'py> = (Graph, Bound<'py, PyDict>, f64, Vec<(usize, usize)>);

fn construction_tuple(py: Python<'_>, c: core::Construction) -> PyResult<ConstructionParts<'_>> {
    let labels = PyDict::new(py);
    for (name, &index) in &c.labels {
        labels.set_item(name, index)?;
    }
    Ok((
        Graph { inner: c.graph },
        labels,
        c.t_star_formula,
        c.optimal_edges,
    ))
}

/// Greedy-family lower-bound instance (k >= 2). Returns
/// (graph, labels, t_star_formula, optimal_edges).
#[pyfunction]
#[pyo3(signature = (k, h=1e-4, h_prime=None))]
fn gen_greedy_lb(
    py: Python<'_>,
    k: usize,
    h: f64,
    h_prime: Option<f64>,
) -> PyResult<ConstructionParts<'_>> {
    let c = core::gen_greedy_lb(k, h, h_prime.unwrap_or(h * 1e-4)).map_err(to_py_err)?;
    construction_tuple(py, c)
}

/// Bottleneck-family lower-bound instance. Returns
/// (graph, labels, t_star_formula, optimal_edges).
#[pyfunction]
#[pyo3(signature = (k, h=1e-3, perturb=true))]
fn gen_bottleneck_lb(
    py: Python<'_>,
    k: usize,
    h: f64,
    perturb: bool,
) -> PyResult<ConstructionParts<'_>> {
    let c = core::gen_bottleneck_lb(k, h, perturb).map_err(to_py_err)?;
    construction_tuple(py, c)
}

#[pymodule]
fn dilation_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(greedy_decide, m)?)?;
    m.add_function(wrap_pyfunction!(augment, m)?)?;
    m.add_function(wrap_pyfunction!(bottleneck_augment, m)?)?;
    m.add_function(wrap_pyfunction!(exact_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(coarse_search, m)?)?;
    m.add_function(wrap_pyfunction!(mst_edges, m)?)?;
    m.add_function(wrap_pyfunction!(select_xy, m)?)?;
    m.add_function(wrap_pyfunction!(gen_greedy_lb, m)?)?;
    m.add_function(wrap_pyfunction!(gen_bottleneck_lb, m)?)?;
    Ok(())
}
