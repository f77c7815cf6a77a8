//! Solvers for the pairwise coverage instance and the directed special
//! case.
//!
//! The undirected objective — coverage gained by a set of new endpoints —
//! is **not** submodular (two endpoints can open routes neither opens
//! alone), so plain greedy has no guarantee. The solvers here work around
//! that in two ways:
//!
//! * [`greedy1`] picks endpoint *batches*: each round adds the size-`t`
//!   subset with the largest marginal union. Batches capture two-edge
//!   routes directly, at the cost of `O(m^t)` candidate subsets per round.
//! * [`greedy2`] splits the budget: the first half greedily maximizes
//!   *reach* (everything an endpoint could cover with some partner, which
//!   is a plain submodular union), the second half greedily completes
//!   pairs against the first half.
//!
//! Neither dominates the other; [`combined`] runs both and keeps the
//! better result. [`exact`] enumerates all size-`k` subsets and is the
//! ground truth for small instances. [`random_baseline`] draws endpoints
//! uniformly. [`directed_greedy`] handles the directed-incoming case,
//! where single new arcs never interact and plain greedy applies.
//!
//! All solutions report `value` as coverage gained over the unpatched
//! graph, so `baseline + value` is the target's patched coverage.

use crate::bitset::BitSet;
use crate::centrality::{coverage_of, coverage_under_patch};
use crate::combinat::{binomial, for_each_combination};
use crate::graph::{DistanceMatrix, EdgePatch, Graph};
use crate::mcp::{reduce_mci, McpError, McpInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Default cap on the number of subsets [`exact`] may enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

/// Errors from the solvers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("batch size must be at least 2, got {0}")]
    BatchTooSmall(usize),
    #[error("exhaustive search needs {combos} subsets, over the {cap} cap")]
    SearchSpaceTooLarge { combos: u128, cap: u128 },
    #[error("algorithm requires a directed graph")]
    RequiresDirected,
    #[error("target node {node} out of range for graph with {n} nodes")]
    TargetOutOfRange { node: usize, n: usize },
    #[error(transparent)]
    Reduce(#[from] McpError),
}

/// One solver round: the batch it considered added and the marginal gain
/// of the solver's round objective (union coverage for [`greedy1`],
/// [`exact`] and [`random_baseline`]; phase reach / phase completion for
/// [`greedy2`]; patched coverage for [`directed_greedy`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveStep {
    pub added: Vec<usize>,
    pub gain: u64,
}

/// A solver result. `chosen` holds object ids (instance solvers) or
/// endpoint node ids ([`directed_greedy`]), ascending. `value` is the
/// coverage gained over the unpatched graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub chosen: Vec<usize>,
    pub value: u64,
    pub steps: Vec<SolveStep>,
}

/// Union of the cover sets of all pairs with at least one endpoint in
/// `subset` and the other in `subset ∪ chosen`, written into `out`
/// (cleared first). This is exactly what `subset` adds on top of the
/// pairs within `chosen`.
fn batch_union(inst: &McpInstance, subset: &[usize], chosen: &[usize], out: &mut BitSet) {
    out.clear();
    for (pos, &a) in subset.iter().enumerate() {
        for &b in &subset[pos..] {
            out.or_assign(inst.cover(a, b));
        }
        for &c in chosen {
            out.or_assign(inst.cover(a, c));
        }
    }
}

/// Best exactly-`b` subset (largest marginal gain over `covered`,
/// ties to the lexicographically smallest id tuple), skipping subsets
/// fully contained in `chosen`. Returns `None` when no subset qualifies.
fn best_batch(
    inst: &McpInstance,
    chosen: &[usize],
    chosen_mask: &[bool],
    covered: &BitSet,
    b: usize,
) -> Option<(u64, Vec<usize>)> {
    let m = inst.object_count();
    if b == 0 || b > m {
        return None;
    }
    let firsts: Vec<usize> = (0..=m - b).collect();
    firsts
        .par_iter()
        .fold(
            || (None::<(u64, Vec<usize>)>, BitSet::new(inst.element_count()), Vec::new()),
            |(mut best, mut scratch, mut subset), &first| {
                for_each_combination(m - first - 1, b - 1, |rest| {
                    subset.clear();
                    subset.push(first);
                    subset.extend(rest.iter().map(|&r| first + 1 + r));
                    if subset.iter().all(|&o| chosen_mask[o]) {
                        return true;
                    }
                    batch_union(inst, &subset, chosen, &mut scratch);
                    let gain = scratch.and_not_count(covered) as u64;
                    let better = match &best {
                        None => true,
                        Some((bg, bs)) => gain > *bg || (gain == *bg && subset < *bs),
                    };
                    if better {
                        best = Some((gain, subset.clone()));
                    }
                    true
                });
                (best, scratch, subset)
            },
        )
        .map(|(best, _, _)| best)
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) => x,
                (x, None) => x,
                (Some(x), Some(y)) => {
                    if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                        Some(y)
                    } else {
                        Some(x)
                    }
                }
            },
        )
}

/// Batch greedy: repeatedly add the size-`t` subset with the largest
/// marginal union until the budget runs out, shrinking the final batch to
/// the leftover budget. Zero-gain batches are still added. Batches may
/// overlap earlier picks (only fully-contained subsets are skipped), so a
/// round can consume less budget than `t`; on degenerate instances with
/// fewer objects than the batch size, the batch shrinks to fit.
///
/// `t` must be at least 2; it is clamped to the remaining budget.
pub fn greedy1(inst: &McpInstance, t: usize) -> Result<Solution, SolverError> {
    if t < 2 {
        return Err(SolverError::BatchTooSmall(t));
    }
    let k = inst.budget();
    let m = inst.object_count();
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_mask = vec![false; m];
    let mut covered = BitSet::new(inst.element_count());
    let mut scratch = BitSet::new(inst.element_count());
    let mut steps = Vec::new();
    loop {
        let remaining = k - chosen.len();
        if remaining == 0 || chosen.len() == m {
            break;
        }
        let b = t.min(remaining).min(m);
        let Some((gain, subset)) = best_batch(inst, &chosen, &chosen_mask, &covered, b) else {
            break;
        };
        batch_union(inst, &subset, &chosen, &mut scratch);
        covered.or_assign(&scratch);
        for &o in &subset {
            if !chosen_mask[o] {
                chosen_mask[o] = true;
                chosen.push(o);
            }
        }
        chosen.sort_unstable();
        steps.push(SolveStep { added: subset, gain });
    }
    let value = covered.count() as u64;
    debug_assert_eq!(value, inst.union_value(&chosen).unwrap());
    Ok(Solution { chosen, value, steps })
}

/// Per-phase summary of a [`greedy2`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Greedy2Stats {
    /// First-phase picks, in pick order.
    pub h: Vec<usize>,
    /// Total reach of the first-phase picks: `|∪ N(o)|` over `o ∈ h`.
    pub degree_h: u64,
    /// Elements covered by pairs within the first-phase picks alone.
    pub cover_h: u64,
    /// Elements the second phase added on top of `cover_h`.
    pub second_phase: u64,
}

/// Two-phase greedy. Phase one spends `⌈k/2⌉` picks greedily maximizing
/// reach (`N(o)` unions — submodular, so plain greedy is near-optimal on
/// it); phase two spends `⌊k/2⌋` picks greedily covering what the phase-one
/// picks can reach but don't yet cover, using the sets
/// `set2(o) = ∪_{h ∈ H} C(o, h) ∖ C(H)`. Ties go to the smallest object
/// id and zero-gain picks still consume budget. The reported value is the
/// full union over all picks, which can exceed the sum of phase gains.
pub fn greedy2(inst: &McpInstance) -> Result<Solution, SolverError> {
    greedy2_with_stats(inst).map(|(s, _)| s)
}

/// [`greedy2`], also returning the per-phase breakdown.
pub fn greedy2_with_stats(inst: &McpInstance) -> Result<(Solution, Greedy2Stats), SolverError> {
    let k = inst.budget();
    let m = inst.object_count();
    let h_budget = k.div_ceil(2).min(m);
    let degs = inst.degree_sets();
    let mut steps = Vec::new();

    // Phase one: greedy maximum coverage on the reach sets.
    let mut h: Vec<usize> = Vec::new();
    let mut in_h = vec![false; m];
    let mut reach = BitSet::new(inst.element_count());
    for _ in 0..h_budget {
        let mut best: Option<(u64, usize)> = None;
        for o in 0..m {
            if in_h[o] {
                continue;
            }
            let gain = degs[o].and_not_count(&reach) as u64;
            if best.map_or(true, |(bg, _)| gain > bg) {
                best = Some((gain, o));
            }
        }
        let Some((gain, o)) = best else { break };
        in_h[o] = true;
        h.push(o);
        reach.or_assign(&degs[o]);
        steps.push(SolveStep { added: vec![o], gain });
    }
    let degree_h = reach.count() as u64;

    let mut cov_h = BitSet::new(inst.element_count());
    inst.union_into(&h, &mut cov_h)?;
    let cover_h = cov_h.count() as u64;

    // Phase two: greedy maximum coverage on what H reaches but misses.
    let set2: Vec<(usize, BitSet)> = (0..m)
        .filter(|&o| !in_h[o])
        .map(|o| {
            let mut s = BitSet::new(inst.element_count());
            for &hh in &h {
                s.or_assign(inst.cover(o, hh));
            }
            s.and_not_assign(&cov_h);
            (o, s)
        })
        .collect();
    let i_budget = (k / 2).min(set2.len());
    let mut picked2 = vec![false; set2.len()];
    let mut covered2 = BitSet::new(inst.element_count());
    let mut chosen: Vec<usize> = h.clone();
    for _ in 0..i_budget {
        let mut best: Option<(u64, usize)> = None;
        for (idx, (_, s)) in set2.iter().enumerate() {
            if picked2[idx] {
                continue;
            }
            let gain = s.and_not_count(&covered2) as u64;
            if best.map_or(true, |(bg, _)| gain > bg) {
                best = Some((gain, idx));
            }
        }
        let Some((gain, idx)) = best else { break };
        picked2[idx] = true;
        let o = set2[idx].0;
        covered2.or_assign(&set2[idx].1);
        chosen.push(o);
        steps.push(SolveStep { added: vec![o], gain });
    }
    let second_phase = covered2.count() as u64;

    chosen.sort_unstable();
    let value = inst.union_value(&chosen)?;
    debug_assert!(value >= cover_h + second_phase);
    let stats = Greedy2Stats { h, degree_h, cover_h, second_phase };
    Ok((Solution { chosen, value, steps }, stats))
}

/// Runs [`greedy1`] and [`greedy2`] and keeps the better solution
/// (ties go to the batch greedy).
pub fn combined(inst: &McpInstance, t: usize) -> Result<Solution, SolverError> {
    let a = greedy1(inst, t)?;
    let b = greedy2(inst)?;
    Ok(if b.value > a.value { b } else { a })
}

fn exact_rec(
    inst: &McpInstance,
    k: usize,
    start: usize,
    prefix: &mut Vec<usize>,
    stack: &mut [BitSet],
    best: &mut (u64, Vec<usize>),
) {
    let level = prefix.len();
    if level == k {
        let value = stack[level].count() as u64;
        if value > best.0 {
            *best = (value, prefix.clone());
        }
        return;
    }
    let m = inst.object_count();
    for o in start..=m - (k - level) {
        let (lo, hi) = stack.split_at_mut(level + 1);
        hi[0].copy_from(&lo[level]);
        for &p in prefix.iter() {
            hi[0].or_assign(inst.cover(p, o));
        }
        hi[0].or_assign(inst.cover(o, o));
        prefix.push(o);
        exact_rec(inst, k, o + 1, prefix, stack, best);
        prefix.pop();
    }
}

/// Exhaustive optimum with the default enumeration cap.
pub fn exact(inst: &McpInstance) -> Result<Solution, SolverError> {
    exact_with_cap(inst, DEFAULT_ENUMERATION_CAP)
}

/// Exhaustive optimum: enumerates every size-`k` object subset in
/// lexicographic order with incremental unions, keeping the first (hence
/// lexicographically smallest) subset achieving the best value. When the
/// budget exceeds the object count, all objects are taken. Errors if the
/// subset count exceeds `cap`.
pub fn exact_with_cap(inst: &McpInstance, cap: u128) -> Result<Solution, SolverError> {
    let m = inst.object_count();
    let k = inst.budget().min(m);
    let combos = binomial(m, k);
    if combos > cap {
        return Err(SolverError::SearchSpaceTooLarge { combos, cap });
    }
    let mut stack = vec![BitSet::new(inst.element_count()); k + 1];
    let mut prefix = Vec::with_capacity(k);
    let mut best = (0u64, Vec::new());
    exact_rec(inst, k, 0, &mut prefix, &mut stack, &mut best);
    let (value, chosen) = best;
    debug_assert_eq!(value, inst.union_value(&chosen).unwrap());
    let steps = vec![SolveStep { added: chosen.clone(), gain: value }];
    Ok(Solution { chosen, value, steps })
}

/// Uniform random endpoint choice: `min(budget, m)` distinct objects by a
/// seeded partial shuffle. Deterministic for a given seed.
pub fn random_baseline(inst: &McpInstance, seed: u64) -> Solution {
    let m = inst.object_count();
    let k = inst.budget().min(m);
    let mut ids: Vec<usize> = (0..m).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..k {
        let j = rng.gen_range(i..m);
        ids.swap(i, j);
    }
    let mut chosen: Vec<usize> = ids[..k].to_vec();
    chosen.sort_unstable();
    let value = inst.union_value(&chosen).expect("ids are in range");
    let steps = vec![SolveStep { added: chosen.clone(), gain: value }];
    Solution { chosen, value, steps }
}

/// Coverage of `v` given patched distances into `v` and base distances
/// out of `v`.
fn directed_cov(d: &DistanceMatrix, v: usize, to_v: &[u32], from_v: &[u32]) -> u64 {
    let n = d.node_count();
    let sentinel = d.sentinel();
    let mut total = 0u64;
    for s in 0..n {
        if s == v || to_v[s] >= sentinel {
            continue;
        }
        let row = d.row(s);
        for t in 0..n {
            if t == v || t == s || from_v[t] >= sentinel {
                continue;
            }
            if (to_v[s] + from_v[t]).min(sentinel) <= row[t] {
                total += 1;
            }
        }
    }
    total
}

/// Plain greedy for the directed-incoming case: each round adds the new
/// arc `u → v` with the largest coverage gain (ties to the smallest node
/// id), continuing through zero-gain rounds until the budget or the
/// candidate pool runs out. New arcs only shorten distances *into* `v` and
/// never combine, so the objective is submodular and greedy carries the
/// usual `1 − 1/e` guarantee.
///
/// `chosen` holds endpoint node ids. `value` is coverage gained over the
/// unpatched graph.
pub fn directed_greedy(
    g: &Graph,
    d: &DistanceMatrix,
    v: usize,
    k: usize,
) -> Result<Solution, SolverError> {
    if !g.is_directed() {
        return Err(SolverError::RequiresDirected);
    }
    let n = g.node_count();
    if v >= n {
        return Err(SolverError::TargetOutOfRange { node: v, n });
    }
    let in_nb = g.in_neighbors(v);
    let mut remaining: Vec<usize> = (0..n)
        .filter(|&u| u != v && in_nb.binary_search(&u).is_err())
        .collect();
    let mut to_v: Vec<u32> = (0..n).map(|s| d.get(s, v)).collect();
    let from_v = d.row(v);
    let mut current = directed_cov(d, v, &to_v, from_v);
    let base = current;
    let mut chosen = Vec::new();
    let mut steps = Vec::new();
    for _ in 0..k.min(remaining.len()) {
        let best = remaining
            .par_iter()
            .map(|&u| {
                let cand: Vec<u32> = (0..n)
                    .map(|s| to_v[s].min(d.sat_add(d.get(s, u), 1)))
                    .collect();
                (directed_cov(d, v, &cand, from_v), u)
            })
            .reduce(
                || (0, usize::MAX),
                |a, b| {
                    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    }
                },
            );
        let (val, u) = best;
        debug_assert!(u != usize::MAX);
        for s in 0..n {
            to_v[s] = to_v[s].min(d.sat_add(d.get(s, u), 1));
        }
        steps.push(SolveStep { added: vec![u], gain: val - current });
        current = val;
        chosen.push(u);
        remaining.retain(|&x| x != u);
    }
    chosen.sort_unstable();
    Ok(Solution { chosen, value: current - base, steps })
}

/// Algorithm selector for [`solve_mci`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Batch greedy with batch size `t`.
    Greedy1 { t: usize },
    /// Two-phase reach-then-complete greedy.
    Greedy2,
    /// Better of the two greedies, ties to the batch greedy.
    Combined { t: usize },
    /// Seeded uniform endpoint choice.
    Random { seed: u64 },
    /// Exhaustive enumeration (small instances only).
    Exact,
    /// Plain greedy over incoming arcs; directed graphs only.
    DirectedGreedy,
}

/// A solved instance mapped back to the graph: the edge patch, the
/// target's coverage before and after, and the raw solver output.
#[derive(Debug, Clone)]
pub struct MciOutcome {
    pub patch: EdgePatch,
    pub baseline: u64,
    pub coverage: u64,
    pub solution: Solution,
}

/// End-to-end solve: reduce (if undirected), run `algo`, map chosen object
/// ids back to endpoint nodes, and recompute the patched coverage from the
/// distance matrix as ground truth.
pub fn solve_mci(
    g: &Graph,
    d: &DistanceMatrix,
    v: usize,
    k: usize,
    algo: Algorithm,
) -> Result<MciOutcome, SolverError> {
    let (endpoints, baseline, solution) = match algo {
        Algorithm::DirectedGreedy => {
            let sol = directed_greedy(g, d, v, k)?;
            (sol.chosen.clone(), coverage_of(d, v), sol)
        }
        _ => {
            let inst = reduce_mci(g, d, v, k)?;
            let sol = match algo {
                Algorithm::Greedy1 { t } => greedy1(&inst, t)?,
                Algorithm::Greedy2 => greedy2(&inst)?,
                Algorithm::Combined { t } => combined(&inst, t)?,
                Algorithm::Random { seed } => random_baseline(&inst, seed),
                Algorithm::Exact => exact(&inst)?,
                Algorithm::DirectedGreedy => unreachable!(),
            };
            let endpoints: Vec<usize> =
                sol.chosen.iter().map(|&o| inst.objects()[o]).collect();
            (endpoints, inst.baseline(), sol)
        }
    };
    let patch = EdgePatch::new(g, v, &endpoints)
        .expect("solver endpoints are valid non-neighbors of the target");
    let coverage = coverage_under_patch(d, &patch);
    debug_assert_eq!(coverage, baseline + solution.value);
    Ok(MciOutcome { patch, baseline, coverage, solution })
}
