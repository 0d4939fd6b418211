//! Benchmark harness: seeded random instances, wall time of `augment`, and
//! an oracle comparison column where the subset cap allows.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use dilation_core::{augment, exact_optimal, MetricGraph, MetricSpace};

/// Recorded in the CSV so rows are reproducible: `n` uniform points in the
/// unit square from ChaCha8 seeded with `(n << 32) | seed`, joined by a path
/// in index order.
pub const GENERATOR_NAME: &str = "chacha8-unit-square-path";

pub fn instance(n: usize, seed: u64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(((n as u64) << 32) | seed);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    let space = MetricSpace::euclidean(points).expect("generated points are valid");
    MetricGraph::new(space, (0..n - 1).map(|i| (i, i + 1))).expect("path edges are valid")
}

pub fn run(sizes: &[usize], k: usize, seeds: u64, eps: f64, cap: u64) -> anyhow::Result<()> {
    println!("n,k,seed,eps,generator,wall_ms,edges_added,dilation,oracle_t_star,ratio");
    for &n in sizes {
        anyhow::ensure!(n >= 2, "instance size must be at least 2, got {n}");
        for seed in 0..seeds {
            let graph = instance(n, seed);

            let started = Instant::now();
            let result = augment(&graph, k, eps)?;
            let wall_ms = started.elapsed().as_secs_f64() * 1e3;

            // Oracle column outside the timed section; blank when the cap
            // refuses the enumeration.
            let (oracle_col, ratio_col) = match exact_optimal(&graph, k, cap) {
                Ok(sol) => (
                    format!("{}", sol.t_star),
                    format!("{}", result.achieved_dilation / sol.t_star),
                ),
                Err(dilation_core::Error::OracleCapExceeded { .. }) => {
                    (String::new(), String::new())
                }
                Err(other) => return Err(other.into()),
            };

            println!(
                "{n},{k},{seed},{eps},{GENERATOR_NAME},{wall_ms:.3},{},{},{oracle_col},{ratio_col}",
                result.edges.len(),
                result.achieved_dilation,
            );
        }
    }
    Ok(())
}
