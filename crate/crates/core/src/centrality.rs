//! Coverage centrality: for a node `v`, the number of ordered pairs
//! `(s, t)` with `s != v != t` such that some shortest `s`-`t` path passes
//! through `v` (equivalently, `d(s, v) + d(v, t) = d(s, t)` and the pair is
//! connected). Undirected graphs count both orientations of each pair, so
//! every value is even; a star center attains the maximum
//! `(n - 1) * (n - 2)`.
//!
//! Two full-graph computations are provided: a naive recount straight from
//! the distance matrix, and a per-source predecessor-DAG accumulation that
//! propagates "targets below me" bit sets up the BFS tree. Both return the
//! same values; the naive recount is the oracle the DAG version is tested
//! against.
//!
//! Patched coverage uses the identity
//! `d'(s, t) = min(d(s, t), d'(s, v) + d'(v, t))`: a pair is covered once
//! the through-`v` route is no longer than the old distance (with both legs
//! reachable). Base-covered pairs stay covered, so coverage is monotone in
//! the patch.

use crate::bitset::BitSet;
use crate::graph::{
    augmented_distance_to_target, DistanceMatrix, EdgePatch, Graph, PatchOrientation,
};
use rayon::prelude::*;

/// Per-node coverage values and competition ranks.
///
/// Rank of `u` is `1 +` the number of nodes with strictly larger coverage
/// ("1, 2, 2, 4" style), so ties share the better rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralityReport {
    values: Vec<u64>,
    ranks: Vec<usize>,
}

impl CentralityReport {
    /// Computes ranks for a vector of coverage values.
    pub fn from_values(values: Vec<u64>) -> CentralityReport {
        let mut sorted = values.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let ranks = values
            .iter()
            .map(|&val| sorted.partition_point(|&x| x > val) + 1)
            .collect();
        CentralityReport { values, ranks }
    }

    /// Ordered-pair coverage per node.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Competition rank per node (1 = most covered).
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }
}

/// Competition rank of `v` in a report.
pub fn rank_of(report: &CentralityReport, v: usize) -> usize {
    report.ranks()[v]
}

/// Coverage centrality of `v` from a distance matrix: ordered pairs
/// `(s, t)`, both different from `v`, whose (finite) distance is realized
/// through `v`.
pub fn coverage_of(d: &DistanceMatrix, v: usize) -> u64 {
    let n = d.node_count();
    let mut covered = 0u64;
    for s in 0..n {
        if s == v {
            continue;
        }
        let row = d.row(s);
        let sv = row[v];
        if !d.is_finite(sv) {
            continue;
        }
        let vrow = d.row(v);
        for t in 0..n {
            if t == v || t == s {
                continue;
            }
            let st = row[t];
            if d.is_finite(st) && d.sat_add(sv, vrow[t]) == st {
                covered += 1;
            }
        }
    }
    covered
}

/// Coverage centrality of the patch target once the patch edges exist,
/// evaluated without materializing the graph.
///
/// A pair `(s, t)` counts when both patched legs are reachable and
/// `d'(s, v) + d'(v, t) <= d(s, t)`; pairs that were disconnected become
/// covered as soon as both legs exist.
pub fn coverage_under_patch(d: &DistanceMatrix, patch: &EdgePatch) -> u64 {
    let n = d.node_count();
    let v = patch.target();
    // Patched distance into the target from every node.
    let to_v: Vec<u32> = (0..n)
        .map(|s| augmented_distance_to_target(d, patch, s))
        .collect();
    // Distance away from the target: symmetric for undirected patches,
    // unchanged base row for incoming arcs.
    let from_v: Vec<u32> = match patch.orientation() {
        PatchOrientation::Undirected => to_v.clone(),
        PatchOrientation::DirectedIncoming => d.row(v).to_vec(),
    };
    let mut covered = 0u64;
    for s in 0..n {
        if s == v || !d.is_finite(to_v[s]) {
            continue;
        }
        let row = d.row(s);
        for t in 0..n {
            if t == v || t == s || !d.is_finite(from_v[t]) {
                continue;
            }
            if d.sat_add(to_v[s], from_v[t]) <= row[t] {
                covered += 1;
            }
        }
    }
    covered
}

/// Coverage of every node by direct recount over the distance matrix.
pub fn all_coverage_naive(d: &DistanceMatrix) -> CentralityReport {
    let n = d.node_count();
    let values: Vec<u64> = (0..n).into_par_iter().map(|v| coverage_of(d, v)).collect();
    CentralityReport::from_values(values)
}

/// Per-source BFS state reused across sources.
struct DagScratch {
    dist: Vec<u32>,
    preds: Vec<Vec<usize>>,
    order: Vec<usize>,
    below: Vec<BitSet>,
}

impl DagScratch {
    fn new(n: usize) -> DagScratch {
        DagScratch {
            dist: vec![0; n],
            preds: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
            below: vec![BitSet::new(n); n],
        }
    }

    /// Adds, for source `s`, each node's covered-pair count to `values`.
    fn accumulate(&mut self, g: &Graph, s: usize, values: &mut [u64]) {
        let n = g.node_count();
        let sentinel = (n + 1) as u32;
        self.dist.fill(sentinel);
        self.order.clear();
        for p in &mut self.preds {
            p.clear();
        }
        for b in &mut self.below {
            b.clear();
        }

        // BFS recording shortest-path predecessors and dequeue order.
        self.dist[s] = 0;
        let mut head = 0;
        self.order.push(s);
        while head < self.order.len() {
            let u = self.order[head];
            head += 1;
            let du = self.dist[u];
            for &w in g.neighbors(u) {
                if self.dist[w] == sentinel {
                    self.dist[w] = du + 1;
                    self.order.push(w);
                }
                if self.dist[w] == du + 1 {
                    self.preds[w].push(u);
                }
            }
        }

        // Walk nodes farthest-first. When `w` is processed every shortest
        // path descendant of `w` is already in `below[w]`, so `w` covers
        // exactly the pairs (s, t) with t in below[w].
        for i in (0..self.order.len()).rev() {
            let w = self.order[i];
            for pi in 0..self.preds[w].len() {
                let p = self.preds[w][pi];
                // Split borrow: predecessors always differ from w.
                let (bp, bw) = if p < w {
                    let (lo, hi) = self.below.split_at_mut(w);
                    (&mut lo[p], &hi[0])
                } else {
                    let (lo, hi) = self.below.split_at_mut(p);
                    (&mut hi[0], &lo[w])
                };
                bp.or_assign(bw);
                bp.insert(w);
            }
            if w != s {
                values[w] += self.below[w].count() as u64;
            }
        }
    }
}

/// Coverage of every node via per-source shortest-path DAG accumulation.
///
/// Matches [`all_coverage_naive`] exactly on both undirected and directed
/// graphs, at cost roughly one BFS plus one bit-set sweep per source.
pub fn all_coverage_dag(g: &Graph) -> CentralityReport {
    let n = g.node_count();
    let values = (0..n)
        .into_par_iter()
        .fold(
            || (DagScratch::new(n), vec![0u64; n]),
            |(mut scratch, mut values), s| {
                scratch.accumulate(g, s, &mut values);
                (scratch, values)
            },
        )
        .map(|(_, values)| values)
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    CentralityReport::from_values(values)
}

/// How many rank positions the patch target gains once the patch edges
/// exist: `rank_before - rank_after` over a full recount on the
/// materialized graph. Negative when other nodes profit more than the
/// target.
pub fn ranking_improvement(g: &Graph, patch: &EdgePatch) -> i64 {
    let v = patch.target();
    let before = all_coverage_dag(g);
    let after = all_coverage_dag(&g.with_patch(patch));
    rank_of(&before, v) as i64 - rank_of(&after, v) as i64
}
