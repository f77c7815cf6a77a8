//! `covcent`: coverage centrality and edge-addition optimization from the
//! command line.
//!
//! Networks are given either as edge-list files (whitespace pairs, `%`/`#`
//! comments, arbitrary labels) or as generator specs:
//! `ba:n=50,m=2,seed=7` (preferential attachment) and
//! `cm:n=50,target_m=85,seed=7` (power-law configuration model).
//!
//! Exit codes: 0 success, 2 bad invocation, 3 unreadable or invalid input
//! data, 4 a resource cap refused the computation.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use covcent::{
    all_coverage_dag, all_coverage_naive, all_pairs_distances, load_network,
    nonsubmodular_gadget, rank_of, ranking_improvement, run_experiment, read_edge_list,
    write_edge_list, write_edge_list_writer, write_results_csv, write_results_csv_writer,
    Algorithm, AlgoSpec, ExperimentConfig, ExperimentError, GadgetError, GenError, Graph,
    IoError, McpError, SolverError, TimingMode,
};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "covcent",
    version,
    about = "Coverage centrality and best-edge-addition solvers"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CentralityAlgo {
    /// Per-source shortest-path DAG accumulation (default).
    Dag,
    /// Direct triple loop over the distance matrix.
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImproveAlgo {
    Greedy1,
    Greedy2,
    Combined,
    Random,
    Exact,
    DirectedGreedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum TimingArg {
    /// Report measured wall times in the CSV.
    Measured,
    /// Write zeros so equal runs produce identical bytes (default).
    Zero,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coverage centrality of every node (or one node).
    Centrality {
        /// Edge-list file or generator spec.
        network: String,
        #[arg(long, value_enum, default_value_t = CentralityAlgo::Dag)]
        algo: CentralityAlgo,
        /// Only report this node (label first, then id).
        #[arg(long)]
        node: Option<String>,
        /// Read the file as a directed graph.
        #[arg(long)]
        directed: bool,
    },
    /// Add up to a budget of edges at one target to maximize its coverage.
    Improve {
        /// Edge-list file or generator spec.
        network: String,
        /// Target node (label first, then id).
        #[arg(long)]
        target: String,
        /// Maximum number of new edges.
        #[arg(long)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = ImproveAlgo::Combined)]
        algo: ImproveAlgo,
        /// Batch size for batch algorithms.
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Seed for the random baseline.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Read the file as a directed graph.
        #[arg(long)]
        directed: bool,
    },
    /// Solve a grid of targets × budgets × algorithms and emit CSV rows.
    Experiment {
        /// Edge-list file or generator spec.
        network: String,
        /// How many targets to sample.
        #[arg(long, default_value_t = 10)]
        targets: usize,
        /// Budgets run from 1 to this value.
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Comma-separated algorithm specs, e.g. greedy1:t=2,greedy2,random.
        #[arg(long, default_value = "greedy1:t=2,greedy2,combined:t=2,random")]
        algos: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TimingArg::Zero)]
        timing: TimingArg,
    },
    /// Build a generator graph (or the gadget) as an edge list.
    Generate {
        /// Generator spec, or `nonsubmodular` for the superadditivity
        /// witness gadget.
        spec: String,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli.cmd) {
        eprintln!("error: {err:#}");
        std::process::exit(classify(&err));
    }
}

fn classify_mcp(e: &McpError) -> i32 {
    match e {
        McpError::MemoryCap { .. } => 4,
        McpError::DirectedUnsupported => 2,
        _ => 3,
    }
}

/// Maps error causes onto the documented exit codes.
fn classify(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<SolverError>() {
            return match e {
                SolverError::SearchSpaceTooLarge { .. } => 4,
                SolverError::BatchTooSmall(_) | SolverError::RequiresDirected => 2,
                SolverError::Reduce(inner) => classify_mcp(inner),
                _ => 3,
            };
        }
        if let Some(e) = cause.downcast_ref::<McpError>() {
            return classify_mcp(e);
        }
        if let Some(e) = cause.downcast_ref::<GenError>() {
            return match e {
                GenError::TargetUnreachable { .. } => 4,
                _ => 3,
            };
        }
        if let Some(e) = cause.downcast_ref::<GadgetError>() {
            return match e {
                GadgetError::TooLarge { .. } => 4,
                _ => 3,
            };
        }
        if let Some(e) = cause.downcast_ref::<ExperimentError>() {
            return match e {
                ExperimentError::BadAlgoSpec(_)
                | ExperimentError::BadNetworkSpec { .. }
                | ExperimentError::ZeroTargets
                | ExperimentError::ZeroBudget
                | ExperimentError::DirectedUnsupported => 2,
                _ => 3,
            };
        }
        if cause.downcast_ref::<IoError>().is_some() {
            return 3;
        }
    }
    3
}

/// Loads either a generator spec (no labels) or an edge-list file
/// (labels preserved), honoring `--directed` for files.
fn load(network: &str, directed: bool) -> Result<(Graph, String, Option<Vec<String>>)> {
    if network.starts_with("ba:") || network.starts_with("cm:") {
        if directed {
            bail!(ExperimentError::BadNetworkSpec {
                spec: network.to_string(),
                msg: "generator graphs are undirected".into(),
            });
        }
        let (g, name) = load_network(network)?;
        Ok((g, name, None))
    } else {
        let path = Path::new(network);
        let (g, stats) =
            read_edge_list(path, directed).with_context(|| format!("reading {network}"))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| network.to_string());
        Ok((g, name, Some(stats.labels)))
    }
}

/// Resolves a node argument: an exact label match wins, otherwise the
/// argument is parsed as a node id.
fn resolve_node(arg: &str, labels: Option<&[String]>, n: usize) -> Result<usize> {
    if let Some(labels) = labels {
        if let Some(id) = labels.iter().position(|l| l == arg) {
            return Ok(id);
        }
    }
    let id: usize = arg
        .parse()
        .map_err(|_| anyhow!(IoError::BadField {
            line: 0,
            msg: format!("no node labeled '{arg}' and it is not an id"),
        }))?;
    if id >= n {
        bail!(IoError::BadField {
            line: 0,
            msg: format!("node id {id} out of range, graph has {n} nodes"),
        });
    }
    Ok(id)
}

fn label_of(labels: Option<&[String]>, id: usize) -> String {
    labels
        .and_then(|ls| ls.get(id).cloned())
        .unwrap_or_else(|| id.to_string())
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Centrality { network, algo, node, directed } => {
            let (g, _, labels) = load(&network, directed)?;
            let start = Instant::now();
            let report = match algo {
                CentralityAlgo::Dag => all_coverage_dag(&g),
                CentralityAlgo::Naive => all_coverage_naive(&all_pairs_distances(&g)),
            };
            eprintln!("computed in {} ms", start.elapsed().as_millis());
            println!("node\tlabel\tcoverage\trank");
            let only = node
                .map(|s| resolve_node(&s, labels.as_deref(), g.node_count()))
                .transpose()?;
            for v in 0..g.node_count() {
                if only.is_some_and(|o| o != v) {
                    continue;
                }
                println!(
                    "{v}\t{}\t{}\t{}",
                    label_of(labels.as_deref(), v),
                    report.values()[v],
                    report.ranks()[v]
                );
            }
        }
        Cmd::Improve { network, target, budget, algo, t, seed, directed } => {
            let (g, _, labels) = load(&network, directed)?;
            let v = resolve_node(&target, labels.as_deref(), g.node_count())?;
            let d = all_pairs_distances(&g);
            let algorithm = match algo {
                ImproveAlgo::Greedy1 => Algorithm::Greedy1 { t },
                ImproveAlgo::Greedy2 => Algorithm::Greedy2,
                ImproveAlgo::Combined => Algorithm::Combined { t },
                ImproveAlgo::Random => Algorithm::Random { seed },
                ImproveAlgo::Exact => Algorithm::Exact,
                ImproveAlgo::DirectedGreedy => Algorithm::DirectedGreedy,
            };
            let start = Instant::now();
            let out = covcent::solve_mci(&g, &d, v, budget, algorithm)?;
            let before = all_coverage_dag(&g);
            let rank_before = rank_of(&before, v);
            let rank_gain = ranking_improvement(&g, &out.patch);
            eprintln!("solved in {} ms", start.elapsed().as_millis());
            println!("target {v}");
            println!("label {}", label_of(labels.as_deref(), v));
            println!("baseline {}", out.baseline);
            println!("coverage {}", out.coverage);
            println!("gain {}", out.coverage - out.baseline);
            let eps = out.patch.endpoints();
            println!(
                "endpoints {}",
                if eps.is_empty() {
                    "-".to_string()
                } else {
                    eps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
                }
            );
            println!(
                "endpoint_labels {}",
                if eps.is_empty() {
                    "-".to_string()
                } else {
                    eps.iter()
                        .map(|&e| label_of(labels.as_deref(), e))
                        .collect::<Vec<_>>()
                        .join(" ")
                }
            );
            println!("rank_before {rank_before}");
            println!("rank_after {}", rank_before as i64 - rank_gain);
            println!("rank_gain {rank_gain}");
        }
        Cmd::Experiment { network, targets, kmax, algos, seed, out, timing } => {
            let (g, name) = load_network(&network)?;
            let algos = algos
                .split(',')
                .map(AlgoSpec::parse)
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = ExperimentConfig {
                network: name,
                targets,
                kmax,
                algos,
                seed,
                timing: match timing {
                    TimingArg::Measured => TimingMode::Measured,
                    TimingArg::Zero => TimingMode::Zero,
                },
            };
            let start = Instant::now();
            let rows = run_experiment(&g, &cfg)?;
            eprintln!("{} rows in {} ms", rows.len(), start.elapsed().as_millis());
            match out {
                Some(path) => write_results_csv(&path, &rows)?,
                None => write_results_csv_writer(std::io::stdout().lock(), &rows)?,
            }
        }
        Cmd::Generate { spec, out } => {
            let g = if spec == "nonsubmodular" {
                let (g, v, p, q) = nonsubmodular_gadget();
                eprintln!("target={v} endpoints={p},{q}");
                g
            } else {
                let (g, _) = load_network(&spec)?;
                g
            };
            match out {
                Some(path) => write_edge_list(&path, &g)?,
                None => write_edge_list_writer(std::io::stdout().lock(), &g)?,
            }
        }
    }
    Ok(())
}
