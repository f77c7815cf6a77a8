//! Pairwise maximum coverage: the solver-facing form of the edge-addition
//! problem.
//!
//! Adding at most `k` edges incident to a target `v` can reroute a node
//! pair through `v` using **at most two** of the new edges (a simple path
//! visits `v` once). So the problem reduces exactly to choosing `k`
//! *objects* — candidate endpoints — to maximize the union of per-pair
//! cover sets: `C(i, j)` holds the elements (ordered node pairs) that the
//! two-edge patch `{u_i, u_j}` routes through `v`, and the diagonal
//! `C(i, i)` holds what the single edge `{u_i}` already achieves. Pairs
//! covered with no new edges at all are counted once in `baseline` and
//! removed from the element set, so solver values are pure gains:
//!
//! `baseline + union over chosen pairs = coverage of v under the patch`.
//!
//! Every element of an instance built by [`reduce_mci`] is covered by at
//! least one object pair; hopeless pairs are dropped during reduction.

use crate::bitset::BitSet;
use crate::centrality::coverage_of;
use crate::graph::{DistanceMatrix, Graph};
use rayon::prelude::*;
use std::io::Write;
use std::sync::Arc;
use thiserror::Error;

/// Default cap on pair-cover storage built by a reduction.
pub const DEFAULT_MEMORY_CAP_BYTES: u64 = 4 << 30;

/// Errors from building or querying an instance.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum McpError {
    #[error("reduction requires an undirected graph")]
    DirectedUnsupported,
    #[error("target node {node} out of range for graph with {n} nodes")]
    TargetOutOfRange { node: usize, n: usize },
    #[error(
        "pair cover storage would need {needed} bytes, over the {cap} byte cap"
    )]
    MemoryCap { needed: u64, cap: u64 },
    #[error("unknown object id {0}")]
    UnknownObject(usize),
    #[error("element index {0} out of range")]
    ElementOutOfRange(usize),
}

/// Index of the unordered object pair `{i, j}` (`i <= j`) in a packed
/// upper-triangular layout that includes the diagonal.
#[inline]
fn pair_slot(i: usize, j: usize, m: usize) -> usize {
    debug_assert!(i <= j && j < m);
    i * m - i * (i + 1) / 2 + j
}

/// Number of unordered pairs over `m` objects, diagonal included.
#[inline]
fn pair_count(m: usize) -> usize {
    m * (m + 1) / 2
}

/// A pairwise maximum-coverage instance.
///
/// Objects are indexed `0..object_count()`; for reduced instances
/// [`Self::objects`] maps each index back to its graph node. Elements are
/// indexed `0..element_count()`; for reduced instances
/// [`Self::elements`] maps each index back to its ordered node pair.
#[derive(Clone, Debug)]
pub struct McpInstance {
    element_count: usize,
    objects: Vec<usize>,
    elements: Vec<(usize, usize)>,
    budget: usize,
    baseline: u64,
    pair_cover: Arc<Vec<BitSet>>,
}

impl McpInstance {
    /// Builds a synthetic instance from explicit pair cover sets; entries
    /// absent from `pairs` cover nothing. Objects are labeled by their own
    /// index and the baseline is zero. Intended for solver tests.
    pub fn from_pair_sets(
        element_count: usize,
        object_count: usize,
        budget: usize,
        pairs: &[((usize, usize), Vec<usize>)],
    ) -> Result<McpInstance, McpError> {
        let mut cover = vec![BitSet::new(element_count); pair_count(object_count)];
        for ((a, b), elems) in pairs {
            let (i, j) = (*a.min(b), *a.max(b));
            if j >= object_count {
                return Err(McpError::UnknownObject(j));
            }
            let slot = pair_slot(i, j, object_count);
            for &e in elems {
                if e >= element_count {
                    return Err(McpError::ElementOutOfRange(e));
                }
                cover[slot].insert(e);
            }
        }
        Ok(McpInstance {
            element_count,
            objects: (0..object_count).collect(),
            elements: (0..element_count).map(|e| (e, e)).collect(),
            budget,
            baseline: 0,
            pair_cover: Arc::new(cover),
        })
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn element_count(&self) -> usize {
        self.element_count
    }

    /// Edge budget carried with the instance.
    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Pairs of the original graph already covered with no new edges.
    pub fn baseline(&self) -> u64 {
        self.baseline
    }

    /// Graph node behind each object index.
    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    /// Ordered node pair behind each element index.
    pub fn elements(&self) -> &[(usize, usize)] {
        &self.elements
    }

    /// The same instance with a different budget; cover storage is shared.
    pub fn with_budget(&self, budget: usize) -> McpInstance {
        McpInstance {
            budget,
            ..self.clone()
        }
    }

    /// Cover set of the unordered object pair `{i, j}` (diagonal allowed).
    pub fn cover(&self, i: usize, j: usize) -> &BitSet {
        let (i, j) = (i.min(j), i.max(j));
        &self.pair_cover[pair_slot(i, j, self.objects.len())]
    }

    /// Union size over all pairs (diagonal included) within `chosen`.
    ///
    /// This is the patch gain over the baseline when `chosen` maps back to
    /// endpoint nodes.
    pub fn union_value(&self, chosen: &[usize]) -> Result<u64, McpError> {
        let mut scratch = BitSet::new(self.element_count);
        self.union_into(chosen, &mut scratch)?;
        Ok(scratch.count() as u64)
    }

    /// Like [`Self::union_value`] but reuses (and returns its result in)
    /// `out`, which is cleared first.
    pub fn union_into(&self, chosen: &[usize], out: &mut BitSet) -> Result<(), McpError> {
        let m = self.objects.len();
        let mut ids = chosen.to_vec();
        ids.sort_unstable();
        ids.dedup();
        if let Some(&bad) = ids.iter().find(|&&o| o >= m) {
            return Err(McpError::UnknownObject(bad));
        }
        out.clear();
        for (a, &i) in ids.iter().enumerate() {
            for &j in &ids[a..] {
                out.or_assign(&self.pair_cover[pair_slot(i, j, m)]);
            }
        }
        Ok(())
    }

    /// Single-object reach sets: `N(o)` is everything `o` covers with *some*
    /// partner object (itself included). `|N(o)|` is the object's degree.
    ///
    /// Degrees upper-bound coverage: a union over pairs within `O'` only
    /// uses sets `C(o, i) ⊆ N(o)` with `o ∈ O'`.
    pub fn degree_sets(&self) -> Vec<BitSet> {
        let m = self.objects.len();
        (0..m)
            .map(|o| {
                let mut n_o = BitSet::new(self.element_count);
                for i in 0..m {
                    n_o.or_assign(self.cover(o, i));
                }
                n_o
            })
            .collect()
    }

    /// Writes a plain-text dump for debugging: a header
    /// `mcp <elements> <objects> <budget> <baseline>` followed by one line
    /// per non-empty pair set, `i j` then the covered element indices.
    /// Format is for humans and scratch tooling, not a stability contract.
    pub fn dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "mcp {} {} {} {}",
            self.element_count,
            self.objects.len(),
            self.budget,
            self.baseline
        )?;
        let m = self.objects.len();
        for i in 0..m {
            for j in i..m {
                let set = &self.pair_cover[pair_slot(i, j, m)];
                if set.is_empty() {
                    continue;
                }
                write!(w, "{i} {j}")?;
                for e in set.ones() {
                    write!(w, " {e}")?;
                }
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

/// Builds the pairwise coverage instance for target `v` and budget `k`
/// with the default memory cap. See [`reduce_mci_with_cap`].
pub fn reduce_mci(
    g: &Graph,
    d: &DistanceMatrix,
    v: usize,
    k: usize,
) -> Result<McpInstance, McpError> {
    reduce_mci_with_cap(g, d, v, k, DEFAULT_MEMORY_CAP_BYTES)
}

/// Builds the pairwise coverage instance for target `v` and budget `k`.
///
/// Objects are the non-neighbors of `v` (excluding `v`), in ascending node
/// order. Elements are the ordered pairs `(s, t)` not covered in the base
/// graph but covered by at least one object pair. The pair `{u, w}` covers
/// `(s, t)` iff
/// `min(d(s,u)+1, d(s,w)+1, d(s,v)) + min(d(u,t)+1, d(w,t)+1, d(v,t)) <= d(s,t)`
/// with saturating sums; the diagonal uses `u` alone. Rejects directed
/// graphs and refuses to allocate more than `cap_bytes` of cover storage.
pub fn reduce_mci_with_cap(
    g: &Graph,
    d: &DistanceMatrix,
    v: usize,
    k: usize,
    cap_bytes: u64,
) -> Result<McpInstance, McpError> {
    if g.is_directed() {
        return Err(McpError::DirectedUnsupported);
    }
    let n = g.node_count();
    if v >= n {
        return Err(McpError::TargetOutOfRange { node: v, n });
    }

    let objects: Vec<usize> = (0..n).filter(|&u| u != v && !g.has_edge(v, u)).collect();
    let m = objects.len();
    let baseline = coverage_of(d, v);

    // Provisional elements: ordered pairs not yet covered, in lex order.
    let vrow = d.row(v);
    let mut elements: Vec<(usize, usize)> = Vec::new();
    for s in 0..n {
        if s == v {
            continue;
        }
        let row = d.row(s);
        for t in 0..n {
            if t == v || t == s {
                continue;
            }
            let base_covered =
                d.is_finite(row[t]) && d.sat_add(row[v], vrow[t]) == row[t];
            if !base_covered {
                elements.push((s, t));
            }
        }
    }

    let words = elements.len().div_ceil(64).max(1);
    let needed = pair_count(m) as u64 * words as u64 * 8;
    if needed > cap_bytes {
        return Err(McpError::MemoryCap { needed, cap: cap_bytes });
    }

    // Per-object legs: into_v[o][s] = patched distance s -> v using only the
    // edge {objects[o], v}; out_v[o][t] mirrors it on the other side.
    let sentinel = d.sentinel();
    let into_v: Vec<Vec<u32>> = objects
        .iter()
        .map(|&u| {
            (0..n)
                .map(|s| d.row(s)[v].min(d.sat_add(d.row(s)[u], 1)))
                .collect()
        })
        .collect();
    let out_v: Vec<Vec<u32>> = objects
        .iter()
        .map(|&u| {
            let urow = d.row(u);
            (0..n).map(|t| vrow[t].min(d.sat_add(urow[t], 1))).collect()
        })
        .collect();

    // Cover sets over provisional element indices, one packed slot per
    // unordered object pair.
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let pair_cover: Vec<BitSet> = slots
        .par_iter()
        .map(|&(i, j)| {
            let mut set = BitSet::new(elements.len());
            let (ai, aj) = (&into_v[i], &into_v[j]);
            let (bi, bj) = (&out_v[i], &out_v[j]);
            for (e, &(s, t)) in elements.iter().enumerate() {
                let leg_in = ai[s].min(aj[s]);
                let leg_out = bi[t].min(bj[t]);
                if leg_in < sentinel
                    && leg_out < sentinel
                    && (leg_in + leg_out).min(sentinel) <= d.get(s, t)
                {
                    set.insert(e);
                }
            }
            set
        })
        .collect();

    // Drop elements no pair can cover, then compact indices.
    let mut coverable = BitSet::new(elements.len());
    for set in &pair_cover {
        coverable.or_assign(set);
    }
    let mut remap = vec![usize::MAX; elements.len()];
    let mut kept: Vec<(usize, usize)> = Vec::with_capacity(coverable.count());
    for e in coverable.ones() {
        remap[e] = kept.len();
        kept.push(elements[e]);
    }
    let element_count = kept.len();
    let pair_cover: Vec<BitSet> = pair_cover
        .into_par_iter()
        .map(|set| {
            let mut compacted = BitSet::new(element_count);
            for e in set.ones() {
                compacted.insert(remap[e]);
            }
            compacted
        })
        .collect();

    Ok(McpInstance {
        element_count,
        objects,
        elements: kept,
        budget: k,
        baseline,
        pair_cover: Arc::new(pair_cover),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::coverage_under_patch;
    use crate::graph::{all_pairs_distances, EdgePatch};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for w in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, w));
                }
            }
        }
        Graph::undirected(n, &edges).unwrap()
    }

    #[test]
    fn pair_slot_is_a_bijection() {
        for m in 0..8 {
            let mut seen = vec![false; pair_count(m)];
            for i in 0..m {
                for j in i..m {
                    let s = pair_slot(i, j, m);
                    assert!(!seen[s]);
                    seen[s] = true;
                }
            }
            assert!(seen.into_iter().all(|x| x));
        }
    }

    #[test]
    fn fully_connected_target_reduces_to_nothing() {
        let g = Graph::undirected(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let d = all_pairs_distances(&g);
        let inst = reduce_mci(&g, &d, 0, 2).unwrap();
        assert_eq!(inst.object_count(), 0);
        assert_eq!(inst.element_count(), 0);
        assert_eq!(inst.baseline(), 6); // star center covers all leaf pairs
    }

    #[test]
    fn directed_graphs_are_rejected() {
        let g = Graph::directed(3, &[(0, 1)]).unwrap();
        let d = all_pairs_distances(&g);
        assert_eq!(
            reduce_mci(&g, &d, 0, 1).unwrap_err(),
            McpError::DirectedUnsupported
        );
    }

    #[test]
    fn memory_cap_is_enforced() {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(1), 20, 0.2);
        let d = all_pairs_distances(&g);
        let err = reduce_mci_with_cap(&g, &d, 0, 2, 16).unwrap_err();
        assert!(matches!(err, McpError::MemoryCap { .. }));
    }

    #[test]
    fn isolated_target_next_to_path() {
        // Path 0-1-2-3 plus isolated node 4 as target: the best two
        // endpoints bracket a long stretch of the path.
        let g = Graph::undirected(5, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let d = all_pairs_distances(&g);
        let inst = reduce_mci(&g, &d, 4, 2).unwrap();
        assert_eq!(inst.object_count(), 4);
        assert_eq!(inst.baseline(), 0);

        // Exhaustive over all 1- and 2-subsets of objects, via the graph.
        let mut best_graph = 0u64;
        for i in 0..4 {
            for j in i..4 {
                let eps: Vec<usize> = if i == j { vec![i] } else { vec![i, j] };
                let patch = EdgePatch::new(&g, 4, &eps).unwrap();
                best_graph = best_graph.max(coverage_under_patch(&d, &patch));
            }
        }
        // Same search through the instance.
        let mut best_inst = 0u64;
        for i in 0..4 {
            for j in i..4 {
                let chosen: Vec<usize> = if i == j { vec![i] } else { vec![i, j] };
                best_inst = best_inst.max(inst.union_value(&chosen).unwrap());
            }
        }
        assert_eq!(best_graph, best_inst + inst.baseline());
        assert_eq!(best_graph, 4); // {0,2} or {1,3}: two pairs, both orders
    }

    #[test]
    fn union_value_empty_and_single() {
        let inst = McpInstance::from_pair_sets(
            5,
            3,
            2,
            &[((0, 0), vec![0, 1]), ((0, 1), vec![0, 1, 2]), ((2, 2), vec![4])],
        )
        .unwrap();
        assert_eq!(inst.union_value(&[]).unwrap(), 0);
        assert_eq!(inst.union_value(&[0]).unwrap(), 2);
        assert_eq!(inst.union_value(&[2]).unwrap(), 1);
        assert_eq!(inst.union_value(&[0, 1]).unwrap(), 3);
        assert_eq!(inst.union_value(&[1]).unwrap(), 0);
        assert_eq!(inst.union_value(&[9]), Err(McpError::UnknownObject(9)));
        // Duplicates collapse.
        assert_eq!(inst.union_value(&[0, 0]).unwrap(), 2);
    }

    #[test]
    fn degree_sets_basics() {
        let inst = McpInstance::from_pair_sets(
            6,
            3,
            2,
            &[((0, 0), vec![0]), ((0, 1), vec![1, 2]), ((1, 2), vec![3])],
        )
        .unwrap();
        let degs = inst.degree_sets();
        assert_eq!(degs[0].ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(degs[1].ones().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(degs[2].ones().collect::<Vec<_>>(), vec![3]);
        // Degree dominates the diagonal cover.
        for o in 0..3 {
            assert!(inst.cover(o, o).is_subset(&degs[o]));
        }
    }

    #[test]
    fn reduction_identity_on_random_graphs() {
        // The load-bearing oracle: baseline + union == patched coverage,
        // for every patch of size <= 3.
        let mut rng = ChaCha8Rng::seed_from_u64(0x1de27177);
        for round in 0..60 {
            let n = rng.gen_range(3..=14);
            let p = rng.gen_range(0.08..0.6);
            let g = random_graph(&mut rng, n, p);
            let d = all_pairs_distances(&g);
            let v = rng.gen_range(0..n);
            let inst = reduce_mci(&g, &d, v, 3).unwrap();
            let m = inst.object_count();
            // Exhaustive subsets of size 0..=3.
            let mut subsets: Vec<Vec<usize>> = vec![vec![]];
            for i in 0..m {
                subsets.push(vec![i]);
                for j in i + 1..m {
                    subsets.push(vec![i, j]);
                    for l in j + 1..m {
                        subsets.push(vec![i, j, l]);
                    }
                }
            }
            for chosen in subsets {
                let eps: Vec<usize> = chosen.iter().map(|&o| inst.objects()[o]).collect();
                let patch = EdgePatch::new(&g, v, &eps).unwrap();
                assert_eq!(
                    inst.baseline() + inst.union_value(&chosen).unwrap(),
                    coverage_under_patch(&d, &patch),
                    "round={round} n={n} v={v} chosen={chosen:?}"
                );
            }
        }
    }

    #[test]
    fn diagonal_cover_is_contained_in_every_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1a6);
        for _ in 0..40 {
            let n = rng.gen_range(3..=12);
            let g = random_graph(&mut rng, n, 0.3);
            let d = all_pairs_distances(&g);
            let v = rng.gen_range(0..n);
            let inst = reduce_mci(&g, &d, v, 2).unwrap();
            let m = inst.object_count();
            for i in 0..m {
                for j in 0..m {
                    assert!(inst.cover(i, i).is_subset(inst.cover(i, j)));
                }
            }
        }
    }

    #[test]
    fn every_element_is_coverable_and_full_set_covers_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xa11);
        for _ in 0..40 {
            let n = rng.gen_range(3..=12);
            let g = random_graph(&mut rng, n, 0.25);
            let d = all_pairs_distances(&g);
            let v = rng.gen_range(0..n);
            let inst = reduce_mci(&g, &d, v, 2).unwrap();
            let all: Vec<usize> = (0..inst.object_count()).collect();
            assert_eq!(
                inst.union_value(&all).unwrap(),
                inst.element_count() as u64
            );
        }
    }

    #[test]
    fn degree_bounds_coverage() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xdeb);
        for _ in 0..30 {
            let n = rng.gen_range(3..=12);
            let g = random_graph(&mut rng, n, 0.3);
            let d = all_pairs_distances(&g);
            let v = rng.gen_range(0..n);
            let inst = reduce_mci(&g, &d, v, 2).unwrap();
            let degs = inst.degree_sets();
            let m = inst.object_count();
            for i in 0..m {
                for j in i..m {
                    let chosen = if i == j { vec![i] } else { vec![i, j] };
                    let mut deg_union = BitSet::new(inst.element_count());
                    for &o in &chosen {
                        deg_union.or_assign(&degs[o]);
                    }
                    assert!(deg_union.count() as u64 >= inst.union_value(&chosen).unwrap());
                }
            }
        }
    }

    #[test]
    fn with_budget_shares_cover_storage() {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(7), 10, 0.3);
        let d = all_pairs_distances(&g);
        let inst = reduce_mci(&g, &d, 0, 2).unwrap();
        let other = inst.with_budget(4);
        assert_eq!(other.budget(), 4);
        assert_eq!(inst.budget(), 2);
        assert!(Arc::ptr_eq(&inst.pair_cover, &other.pair_cover));
    }

    #[test]
    fn dump_format_shape() {
        let inst = McpInstance::from_pair_sets(
            4,
            2,
            1,
            &[((0, 0), vec![1, 3]), ((0, 1), vec![0])],
        )
        .unwrap();
        let mut buf = Vec::new();
        inst.dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "mcp 4 2 1 0");
        assert_eq!(lines[1], "0 0 1 3");
        assert_eq!(lines[2], "0 1 0");
        assert_eq!(lines.len(), 3);
    }
}
