//! `dilation` — inspect and improve the dilation of metric graphs.
//!
//! Subcommands: `dilation`, `decide`, `augment`, `gen`, `oracle`, `bench`.
//! All JSON outputs carry `"schema": 1`. Exit codes: 0 success (and YES
//! verdicts), 10 NO verdict from `decide`, 3 oracle cap exceeded, 1 other
//! runtime errors, 2 usage errors.

mod bench;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use dilation_core::io::{load_graph, save_graph};
use dilation_core::{
    augment, bottleneck_augment, compute_apsp, exact_optimal, gen_bottleneck_lb, gen_greedy_lb,
    greedy_trace, AugmentationResult, Construction, MetricGraph, Verdict, DEFAULT_SUBSET_CAP,
};

pub const SCHEMA_VERSION: u64 = 1;
const ORACLE_CAP_ENV: &str = "DILATION_ORACLE_CAP";

#[derive(Parser)]
#[command(
    name = "dilation",
    version,
    about = "Improve the dilation of a metric graph by adding edges"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Greedy,
    Bottleneck,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Greedy,
    Bottleneck,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dilation of a graph and the attaining pair.
    Dilation { graph: PathBuf },
    /// Run the greedy decision procedure: YES certifies t* <= t, NO
    /// certifies t* > t/(k+1). Exit code 0 for YES, 10 for NO.
    Decide {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: f64,
        /// Write the per-candidate sweep log as JSON lines.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Add at most k edges minimising the dilation.
    Augment {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        method: Method,
    },
    /// Exact brute-force optimum (alias of `augment --method oracle`).
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Generate one of the adversarial families and its sidecar metadata.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        k: usize,
        /// Vertical scale; defaults to 1e-4 (greedy) or 1e-3 (bottleneck).
        #[arg(long)]
        h: Option<f64>,
        /// Secondary offset for the greedy family; defaults to h * 1e-4.
        #[arg(long)]
        h_prime: Option<f64>,
        /// Perturb the bottleneck family so the pick order needs no
        /// adversarial tie-breaking.
        #[arg(long)]
        perturb: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Time `augment` on seeded random instances and emit CSV.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
}

fn oracle_cap() -> anyhow::Result<u64> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(text) => text
            .parse::<u64>()
            .with_context(|| format!("{ORACLE_CAP_ENV} must be an integer, got {text:?}")),
        Err(_) => Ok(DEFAULT_SUBSET_CAP),
    }
}

fn json_f64(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

fn edge_pairs(edges: &[dilation_core::EdgeCandidate]) -> Value {
    Value::Array(edges.iter().map(|e| json!([e.u, e.v])).collect())
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "YES",
        Verdict::No => "NO",
    }
}

/// Recompute the achieved dilation of `graph` plus `edges` from scratch and
/// check it against the reported value.
fn reverify(graph: &MetricGraph, result: &AugmentationResult) -> anyhow::Result<f64> {
    let pairs: Vec<(usize, usize)> = result.edges.iter().map(|e| e.pair()).collect();
    let augmented = graph.with_edges(&pairs)?;
    let recomputed = compute_apsp(&augmented).dilation(graph.space()).0;
    let reported = result.achieved_dilation;
    let agree = if recomputed.is_finite() {
        (recomputed - reported).abs() <= 1e-9 * recomputed.abs().max(reported.abs())
    } else {
        reported.is_infinite()
    };
    anyhow::ensure!(
        agree,
        "reported dilation {reported} disagrees with recomputation {recomputed}"
    );
    Ok(recomputed)
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Dilation { graph } => {
            let graph = load_graph(&graph)?;
            let (dilation, pair) = compute_apsp(&graph).dilation(graph.space());
            let out = json!({
                "schema": SCHEMA_VERSION,
                "dilation": json_f64(dilation),
                "pair": [pair.0, pair.1],
            });
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Decide {
            graph,
            k,
            t,
            trace_out,
        } => {
            let graph = load_graph(&graph)?;
            let (outcome, trace) = greedy_trace(&graph, k, t)?;
            if let Some(path) = trace_out {
                let mut file = fs::File::create(&path)
                    .with_context(|| format!("cannot create {}", path.display()))?;
                for entry in &trace {
                    let line = json!({
                        "u": entry.candidate.u,
                        "v": entry.candidate.v,
                        "length": entry.candidate.length,
                        "graph_dist": json_f64(entry.graph_dist),
                        "accepted": entry.accepted,
                    });
                    writeln!(file, "{line}")?;
                }
            }
            let out = json!({
                "schema": SCHEMA_VERSION,
                "verdict": verdict_str(outcome.verdict),
                "k": k,
                "t": t,
                "added_edges": edge_pairs(&outcome.added_edges),
                "final_dilation": outcome.final_dilation.map(json_f64).unwrap_or(Value::Null),
                "processed_count": outcome.processed_count,
            });
            println!("{out}");
            Ok(match outcome.verdict {
                Verdict::Yes => ExitCode::SUCCESS,
                Verdict::No => ExitCode::from(10),
            })
        }
        Command::Augment {
            graph,
            k,
            eps,
            method,
        } => run_augment(&graph, k, eps, method),
        Command::Oracle { graph, k } => run_augment(&graph, k, 0.1, Method::Oracle),
        Command::Gen {
            family,
            k,
            h,
            h_prime,
            perturb,
            output,
        } => {
            let (construction, meta) = match family {
                FamilyArg::Greedy => {
                    let h = h.unwrap_or(1e-4);
                    let h_prime = h_prime.unwrap_or(h * 1e-4);
                    let c = gen_greedy_lb(k, h, h_prime)?;
                    let meta = json!({"family": "greedy", "k": k, "h": h, "h_prime": h_prime});
                    (c, meta)
                }
                FamilyArg::Bottleneck => {
                    let h = h.unwrap_or(1e-3);
                    let c = gen_bottleneck_lb(k, h, perturb)?;
                    let meta = json!({"family": "bottleneck", "k": k, "h": h, "perturb": perturb});
                    (c, meta)
                }
            };
            let sidecar_path = output.with_extension("meta.json");
            save_graph(&construction.graph, &output)?;
            write_sidecar(&construction, meta, &sidecar_path)?;
            let out = json!({
                "schema": SCHEMA_VERSION,
                "graph": output.display().to_string(),
                "sidecar": sidecar_path.display().to_string(),
                "n": construction.graph.n(),
            });
            println!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            sizes,
            k,
            seeds,
            eps,
        } => {
            bench::run(&sizes, k, seeds, eps, oracle_cap()?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_augment(path: &Path, k: usize, eps: f64, method: Method) -> anyhow::Result<ExitCode> {
    let graph = load_graph(path)?;
    let (result, label, subsets) = match method {
        Method::Greedy => (augment(&graph, k, eps)?, "greedy", None),
        Method::Bottleneck => (bottleneck_augment(&graph, k)?, "bottleneck", None),
        Method::Oracle => {
            let sol = exact_optimal(&graph, k, oracle_cap()?)?;
            let pairs: Vec<(usize, usize)> = sol.edges.iter().map(|e| e.pair()).collect();
            let augmented = graph.with_edges(&pairs)?;
            let achieved = compute_apsp(&augmented).dilation(graph.space()).0;
            let result = AugmentationResult {
                edges: sol.edges,
                achieved_dilation: achieved,
                certified_factor: Some(1.0),
                grid_trace: Vec::new(),
            };
            (result, "oracle", Some(sol.subsets_evaluated))
        }
    };
    let achieved = reverify(&graph, &result)?;
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA_VERSION));
    out.insert("method".into(), json!(label));
    out.insert("k".into(), json!(k));
    if method == Method::Greedy {
        out.insert("eps".into(), json!(eps));
    }
    out.insert("edges".into(), edge_pairs(&result.edges));
    out.insert("achieved_dilation".into(), json_f64(achieved));
    out.insert(
        "certified_factor".into(),
        result
            .certified_factor
            .map(|f| json!(f))
            .unwrap_or(Value::Null),
    );
    if method == Method::Greedy {
        let trace: Vec<Value> = result
            .grid_trace
            .iter()
            .map(|&(t, v)| json!([t, verdict_str(v)]))
            .collect();
        out.insert("grid_trace".into(), Value::Array(trace));
    }
    if let Some(count) = subsets {
        out.insert("subsets_evaluated".into(), json!(count));
    }
    println!("{}", Value::Object(out));
    Ok(ExitCode::SUCCESS)
}

fn write_sidecar(construction: &Construction, mut meta: Value, path: &Path) -> anyhow::Result<()> {
    let labels: Map<String, Value> = construction
        .labels
        .iter()
        .map(|(name, &index)| (name.clone(), json!(index)))
        .collect();
    let edges: Vec<Value> = construction
        .optimal_edges
        .iter()
        .map(|&(u, v)| json!([u, v]))
        .collect();
    let obj = meta.as_object_mut().expect("meta is an object");
    obj.insert("schema".into(), json!(SCHEMA_VERSION));
    obj.insert("labels".into(), Value::Object(labels));
    obj.insert("t_star_formula".into(), json!(construction.t_star_formula));
    obj.insert("optimal_edges".into(), Value::Array(edges));
    fs::write(path, format!("{meta}\n"))
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn exit_code_for(err: &anyhow::Error) -> ExitCode {
    if let Some(dilation_core::Error::OracleCapExceeded { .. }) =
        err.downcast_ref::<dilation_core::Error>()
    {
        return ExitCode::from(3);
    }
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    }
}
