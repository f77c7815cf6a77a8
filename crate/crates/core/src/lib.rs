//! Coverage centrality for unweighted graphs, plus solvers that pick a small
//! set of new edges incident to a target node so that its coverage grows as
//! much as possible.
//!
//! The crate is organized around a few small layers:
//!
//! * [`graph`] — immutable adjacency-list graphs, BFS distances with an
//!   explicit unreachable sentinel, and virtual edge patches evaluated
//!   without mutating the graph.
//! * [`centrality`] — coverage centrality (how many ordered pairs route a
//!   shortest path through a node), competition ranks, and a fast
//!   predecessor-DAG accumulation that matches the naive recount.
//! * [`mcp`] — the pairwise set-cover instance built from a target node:
//!   each candidate endpoint pair covers the node pairs it would reroute.
//! * [`solvers`] — group greedy, degree-then-pair greedy, exact enumeration,
//!   a random baseline, and a marginal-gain greedy for directed graphs.
//! * [`generators`] — preferential-attachment and configuration-model random
//!   graphs and a fixed superadditivity gadget.
//! * [`gadgets`] — layered constructions tying set cover and densest
//!   subgraph instances to coverage improvement.
//! * [`io`] — edge-list parsing and the results CSV schema.
//! * [`experiment`] — a deterministic sweep harness over targets, budgets,
//!   and algorithms.

pub mod bitset;
pub mod centrality;
pub mod combinat;
pub mod experiment;
pub mod gadgets;
pub mod generators;
pub mod graph;
pub mod io;
pub mod mcp;
pub mod solvers;

pub use bitset::BitSet;
pub use centrality::{
    all_coverage_dag, all_coverage_naive, coverage_of, coverage_under_patch, rank_of,
    ranking_improvement, CentralityReport,
};
pub use graph::{
    all_pairs_distances, augmented_distance_to_target, bfs_from, DistanceMatrix, EdgePatch,
    Graph, PatchOrientation,
};
pub use experiment::{
    cell_seed, load_network, run_experiment, AlgoSpec, ExperimentConfig, ExperimentError,
    TimingMode,
};
pub use gadgets::{build_dks_gadget, build_mc_gadget, DksGadget, GadgetError, McGadget};
pub use generators::{
    barabasi_albert, configuration_model, nonsubmodular_gadget, power_law_configuration,
    GenError,
};
pub use io::{
    read_edge_list, read_results_csv, write_edge_list, write_edge_list_writer,
    write_results_csv, write_results_csv_writer, IoError, ParseStats, ResultRow, RESULTS_HEADER,
};
pub use mcp::{reduce_mci, reduce_mci_with_cap, McpError, McpInstance};
pub use solvers::{
    combined, directed_greedy, exact, exact_with_cap, greedy1, greedy2, greedy2_with_stats,
    random_baseline, solve_mci, Algorithm, Greedy2Stats, MciOutcome, Solution, SolveStep,
    SolverError,
};
