//! Batch experiment harness: run a set of solvers over sampled targets
//! and budgets on one network, and emit canonical result rows.
//!
//! Everything is reproducible: targets are sampled from the experiment
//! seed, each seeded solver cell derives its own seed from
//! `(seed, target, k, algorithm)`, rows are sorted canonically, and
//! timing can be suppressed so that equal configurations produce
//! byte-identical CSV files regardless of thread scheduling.

use crate::graph::{all_pairs_distances, Graph};
use crate::generators::{barabasi_albert, power_law_configuration, GenError};
use crate::io::{read_edge_list, IoError, ResultRow};
use crate::mcp::{reduce_mci, McpInstance};
use crate::solvers::{
    combined, exact, greedy1, greedy2, random_baseline, Solution, SolverError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::path::Path;
use std::time::Instant;
use thiserror::Error;

/// Errors from configuring or running an experiment.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("experiments run on undirected graphs only")]
    DirectedUnsupported,
    #[error("unknown algorithm spec '{0}'")]
    BadAlgoSpec(String),
    #[error("bad network spec '{spec}': {msg}")]
    BadNetworkSpec { spec: String, msg: String },
    #[error("need at least one target")]
    ZeroTargets,
    #[error("need a budget of at least 1")]
    ZeroBudget,
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Reduce(#[from] crate::mcp::McpError),
}

/// A solver selection for experiment cells, parsed from strings like
/// `greedy1:t=2`, `greedy2`, `combined:t=3`, `random`, `exact`.
/// Batch algorithms default to `t = 2` when no batch size is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgoSpec {
    Greedy1 { t: usize },
    Greedy2,
    Combined { t: usize },
    Random,
    Exact,
}

impl AlgoSpec {
    /// Parses one spec.
    pub fn parse(s: &str) -> Result<AlgoSpec, ExperimentError> {
        let bad = || ExperimentError::BadAlgoSpec(s.to_string());
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let parse_t = |arg: Option<&str>| -> Result<usize, ExperimentError> {
            match arg {
                None => Ok(2),
                Some(a) => {
                    let t_str = a.strip_prefix("t=").ok_or_else(bad)?;
                    t_str.parse().map_err(|_| bad())
                }
            }
        };
        match name {
            "greedy1" => Ok(AlgoSpec::Greedy1 { t: parse_t(arg)? }),
            "combined" => Ok(AlgoSpec::Combined { t: parse_t(arg)? }),
            "greedy2" if arg.is_none() => Ok(AlgoSpec::Greedy2),
            "random" if arg.is_none() => Ok(AlgoSpec::Random),
            "exact" if arg.is_none() => Ok(AlgoSpec::Exact),
            _ => Err(bad()),
        }
    }

    /// Column label for the CSV.
    pub fn label(&self) -> &'static str {
        match self {
            AlgoSpec::Greedy1 { .. } => "greedy1",
            AlgoSpec::Greedy2 => "greedy2",
            AlgoSpec::Combined { .. } => "combined",
            AlgoSpec::Random => "random",
            AlgoSpec::Exact => "exact",
        }
    }
}

/// Whether rows carry measured wall times or zeros (for byte-identical
/// output).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimingMode {
    Measured,
    Zero,
}

/// One experiment: a network name for the rows, how many targets to
/// sample, budgets `1..=kmax`, the solvers to run, the master seed, and
/// the timing mode.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub network: String,
    pub targets: usize,
    pub kmax: usize,
    pub algos: Vec<AlgoSpec>,
    pub seed: u64,
    pub timing: TimingMode,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-cell seed for seeded solvers, mixed from the experiment seed and
/// the cell coordinates so cells are independent but reproducible.
pub fn cell_seed(seed: u64, target: usize, k: usize, algo_ordinal: usize) -> u64 {
    let mut s = splitmix64(seed);
    s = splitmix64(s ^ target as u64);
    s = splitmix64(s ^ k as u64);
    s = splitmix64(s ^ algo_ordinal as u64);
    s
}

/// Samples `count` distinct targets (all nodes if `count >= n`),
/// ascending.
fn sample_targets(n: usize, count: usize, seed: u64) -> Vec<usize> {
    let count = count.min(n);
    let mut ids: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let j = rng.gen_range(i..n);
        ids.swap(i, j);
    }
    let mut picked = ids[..count].to_vec();
    picked.sort_unstable();
    picked
}

/// Loads a network from a spec: `ba:n=..,m=..[,seed=..]` builds a
/// preferential-attachment graph, `cm:n=..,target_m=..[,seed=..]` builds a
/// power-law configuration graph, anything else is read as an undirected
/// edge-list file. Returns the graph and its row name (the spec itself
/// for generators, the file stem for files).
pub fn load_network(spec: &str) -> Result<(Graph, String), ExperimentError> {
    let parse_params = |body: &str, keys: &[&str]| -> Result<HashMap<String, u64>, ExperimentError> {
        let mut out = HashMap::new();
        for part in body.split(',') {
            let (key, val) = part.split_once('=').ok_or_else(|| {
                ExperimentError::BadNetworkSpec {
                    spec: spec.to_string(),
                    msg: format!("expected key=value, found '{part}'"),
                }
            })?;
            if !keys.contains(&key) {
                return Err(ExperimentError::BadNetworkSpec {
                    spec: spec.to_string(),
                    msg: format!("unknown key '{key}'"),
                });
            }
            let v: u64 = val.parse().map_err(|_| ExperimentError::BadNetworkSpec {
                spec: spec.to_string(),
                msg: format!("bad value for '{key}'"),
            })?;
            out.insert(key.to_string(), v);
        }
        Ok(out)
    };
    let need = |params: &HashMap<String, u64>, key: &str| -> Result<u64, ExperimentError> {
        params.get(key).copied().ok_or_else(|| ExperimentError::BadNetworkSpec {
            spec: spec.to_string(),
            msg: format!("missing '{key}'"),
        })
    };
    if let Some(body) = spec.strip_prefix("ba:") {
        let p = parse_params(body, &["n", "m", "seed"])?;
        let g = barabasi_albert(
            need(&p, "n")? as usize,
            need(&p, "m")? as usize,
            p.get("seed").copied().unwrap_or(0),
        )?;
        Ok((g, spec.to_string()))
    } else if let Some(body) = spec.strip_prefix("cm:") {
        let p = parse_params(body, &["n", "target_m", "seed"])?;
        let (g, _erased) = power_law_configuration(
            need(&p, "n")? as usize,
            need(&p, "target_m")? as usize,
            p.get("seed").copied().unwrap_or(0),
        )?;
        Ok((g, spec.to_string()))
    } else {
        let path = Path::new(spec);
        let (g, _stats) = read_edge_list(path, false)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| spec.to_string());
        Ok((g, name))
    }
}

/// Runs the experiment grid: every sampled target × budget `1..=kmax` ×
/// algorithm. The exhaustive optimum is computed once per (target,
/// budget) when feasible and shared across that cell row's ratios; an
/// infeasible optimum leaves the ratio blank. Rows come back in canonical
/// order (target, budget, algorithm, batch size).
pub fn run_experiment(
    g: &Graph,
    cfg: &ExperimentConfig,
) -> Result<Vec<ResultRow>, ExperimentError> {
    if g.is_directed() {
        return Err(ExperimentError::DirectedUnsupported);
    }
    if cfg.targets == 0 {
        return Err(ExperimentError::ZeroTargets);
    }
    if cfg.kmax == 0 {
        return Err(ExperimentError::ZeroBudget);
    }
    let d = all_pairs_distances(g);
    let targets = sample_targets(g.node_count(), cfg.targets, cfg.seed);

    // One reduction per target at the largest budget; smaller budgets
    // share the cover storage.
    let instances: Vec<(usize, McpInstance)> = targets
        .par_iter()
        .map(|&v| reduce_mci(g, &d, v, cfg.kmax).map(|inst| (v, inst)))
        .collect::<Result<_, _>>()?;

    // Exhaustive optimum per (target, budget), where feasible.
    let optima: Vec<((usize, usize), Option<u64>)> = instances
        .par_iter()
        .flat_map_iter(|(v, inst)| (1..=cfg.kmax).map(move |k| (*v, inst, k)))
        .map(|(v, inst, k)| {
            let opt = match exact(&inst.with_budget(k)) {
                Ok(sol) => Ok(Some(sol.value)),
                Err(SolverError::SearchSpaceTooLarge { .. }) => Ok(None),
                Err(e) => Err(e),
            }?;
            Ok(((v, k), opt))
        })
        .collect::<Result<_, ExperimentError>>()?;
    let optima: HashMap<(usize, usize), Option<u64>> = optima.into_iter().collect();

    let cells: Vec<(usize, usize, usize)> = (0..instances.len())
        .flat_map(|vi| {
            (1..=cfg.kmax).flat_map(move |k| (0..cfg.algos.len()).map(move |ai| (vi, k, ai)))
        })
        .collect();
    let mut rows: Vec<ResultRow> = cells
        .par_iter()
        .map(|&(vi, k, ai)| -> Result<ResultRow, ExperimentError> {
            let (v, inst) = &instances[vi];
            let inst_k = inst.with_budget(k);
            let algo = cfg.algos[ai];
            let start = Instant::now();
            let (t_col, seed_col, sol): (Option<usize>, Option<u64>, Solution) = match algo {
                AlgoSpec::Greedy1 { t } => (Some(t), None, greedy1(&inst_k, t)?),
                AlgoSpec::Greedy2 => (None, None, greedy2(&inst_k)?),
                AlgoSpec::Combined { t } => (Some(t), None, combined(&inst_k, t)?),
                AlgoSpec::Random => {
                    let s = cell_seed(cfg.seed, *v, k, ai);
                    (None, Some(s), random_baseline(&inst_k, s))
                }
                AlgoSpec::Exact => (None, None, exact(&inst_k)?),
            };
            let wall_ms = match cfg.timing {
                TimingMode::Measured => start.elapsed().as_millis() as u64,
                TimingMode::Zero => 0,
            };
            let ratio_to_exact = optima[&(*v, k)].map(|opt| {
                if opt == 0 {
                    1.0
                } else {
                    sol.value as f64 / opt as f64
                }
            });
            let coverage_ordered = inst_k.baseline() + sol.value;
            Ok(ResultRow {
                network: cfg.network.clone(),
                target: *v,
                k,
                algorithm: algo.label().to_string(),
                t: t_col,
                seed: seed_col,
                coverage_ordered,
                coverage_unordered: coverage_ordered / 2,
                baseline: inst_k.baseline(),
                ratio_to_exact,
                wall_ms,
            })
        })
        .collect::<Result<_, _>>()?;
    rows.sort_by(|a, b| {
        (a.network.as_str(), a.target, a.k, a.algorithm.as_str(), a.t, a.seed).cmp(&(
            b.network.as_str(),
            b.target,
            b.k,
            b.algorithm.as_str(),
            b.t,
            b.seed,
        ))
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algo_specs_parse() {
        assert_eq!(AlgoSpec::parse("greedy1").unwrap(), AlgoSpec::Greedy1 { t: 2 });
        assert_eq!(AlgoSpec::parse("greedy1:t=3").unwrap(), AlgoSpec::Greedy1 { t: 3 });
        assert_eq!(AlgoSpec::parse("combined:t=2").unwrap(), AlgoSpec::Combined { t: 2 });
        assert_eq!(AlgoSpec::parse("greedy2").unwrap(), AlgoSpec::Greedy2);
        assert_eq!(AlgoSpec::parse("random").unwrap(), AlgoSpec::Random);
        assert_eq!(AlgoSpec::parse("exact").unwrap(), AlgoSpec::Exact);
        for bad in ["greedy3", "greedy1:t=x", "greedy1:q=2", "greedy2:t=2", ""] {
            assert!(AlgoSpec::parse(bad).is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn cell_seeds_differ_across_coordinates() {
        let base = cell_seed(7, 1, 1, 0);
        assert_eq!(base, cell_seed(7, 1, 1, 0));
        assert_ne!(base, cell_seed(8, 1, 1, 0));
        assert_ne!(base, cell_seed(7, 2, 1, 0));
        assert_ne!(base, cell_seed(7, 1, 2, 0));
        assert_ne!(base, cell_seed(7, 1, 1, 1));
    }

    #[test]
    fn load_network_parses_generator_specs() {
        let (g, name) = load_network("ba:n=30,m=2,seed=5").unwrap();
        assert_eq!(g.node_count(), 30);
        assert_eq!(name, "ba:n=30,m=2,seed=5");
        let (g2, name2) = load_network("cm:n=50,target_m=85,seed=7").unwrap();
        assert_eq!(g2.node_count(), 50);
        assert_eq!(name2, "cm:n=50,target_m=85,seed=7");
        assert!(load_network("ba:n=30").is_err(), "missing m");
        assert!(load_network("ba:n=30,m=2,extra=1").is_err());
        assert!(load_network("ba:n=abc,m=2").is_err());
        assert!(load_network("/definitely/not/a/file").is_err());
    }

    #[test]
    fn load_network_reads_files_by_stem() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/karate.txt");
        let (g, name) = load_network(path.to_str().unwrap()).unwrap();
        assert_eq!(g.node_count(), 34);
        assert_eq!(name, "karate");
    }

    #[test]
    fn experiment_grid_shape_and_order() {
        let g = barabasi_albert(20, 2, 3).unwrap();
        let cfg = ExperimentConfig {
            network: "test".into(),
            targets: 4,
            kmax: 2,
            algos: vec![
                AlgoSpec::Greedy1 { t: 2 },
                AlgoSpec::Greedy2,
                AlgoSpec::Random,
                AlgoSpec::Exact,
            ],
            seed: 11,
            timing: TimingMode::Zero,
        };
        let rows = run_experiment(&g, &cfg).unwrap();
        assert_eq!(rows.len(), 4 * 2 * 4);
        // Canonical order: sorted by (target, k, algorithm, t, seed).
        let mut sorted = rows.clone();
        sorted.sort_by(|a, b| {
            (a.target, a.k, a.algorithm.as_str(), a.t, a.seed).cmp(&(
                b.target,
                b.k,
                b.algorithm.as_str(),
                b.t,
                b.seed,
            ))
        });
        assert_eq!(rows, sorted);
        for row in &rows {
            assert_eq!(row.coverage_unordered * 2, row.coverage_ordered);
            assert!(row.coverage_ordered >= row.baseline);
            assert_eq!(row.wall_ms, 0);
            let ratio = row.ratio_to_exact.expect("tiny instances are exact-feasible");
            assert!((0.0..=1.0).contains(&ratio), "gain ratio in range");
            if row.algorithm == "exact" {
                assert_eq!(ratio, 1.0);
            }
            if row.algorithm == "random" {
                assert!(row.seed.is_some());
            } else {
                assert!(row.seed.is_none());
            }
        }
    }

    #[test]
    fn experiment_rows_are_reproducible() {
        let g = barabasi_albert(18, 2, 9).unwrap();
        let cfg = ExperimentConfig {
            network: "repro".into(),
            targets: 3,
            kmax: 2,
            algos: vec![AlgoSpec::Combined { t: 2 }, AlgoSpec::Random],
            seed: 5,
            timing: TimingMode::Zero,
        };
        let a = run_experiment(&g, &cfg).unwrap();
        let b = run_experiment(&g, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn experiment_rejects_bad_configs() {
        let g = barabasi_albert(10, 2, 1).unwrap();
        let cfg = ExperimentConfig {
            network: "x".into(),
            targets: 0,
            kmax: 2,
            algos: vec![AlgoSpec::Greedy2],
            seed: 1,
            timing: TimingMode::Zero,
        };
        assert!(matches!(
            run_experiment(&g, &cfg).unwrap_err(),
            ExperimentError::ZeroTargets
        ));
        let cfg2 = ExperimentConfig { targets: 2, kmax: 0, ..cfg.clone() };
        assert!(matches!(
            run_experiment(&g, &cfg2).unwrap_err(),
            ExperimentError::ZeroBudget
        ));
        let dg = Graph::directed(4, &[(0, 1)]).unwrap();
        let cfg3 = ExperimentConfig { targets: 1, kmax: 1, ..cfg };
        assert!(matches!(
            run_experiment(&dg, &cfg3).unwrap_err(),
            ExperimentError::DirectedUnsupported
        ));
    }

    #[test]
    fn target_count_clamps_to_node_count() {
        let g = barabasi_albert(6, 2, 2).unwrap();
        let cfg = ExperimentConfig {
            network: "clamp".into(),
            targets: 50,
            kmax: 1,
            algos: vec![AlgoSpec::Greedy2],
            seed: 3,
            timing: TimingMode::Zero,
        };
        let rows = run_experiment(&g, &cfg).unwrap();
        assert_eq!(rows.len(), 6);
        let mut targets: Vec<usize> = rows.iter().map(|r| r.target).collect();
        targets.dedup();
        assert_eq!(targets, vec![0, 1, 2, 3, 4, 5]);
    }
}
