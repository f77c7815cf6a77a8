//! Shared helpers for the acceptance suite: random graph sources, subset
//! enumeration, and a rebuild-the-graph coverage oracle that never touches
//! the distance-patching fast paths it is used to check.

use covcent::{all_pairs_distances, coverage_of, Graph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random undirected graph with edge probability `p`; guaranteed at least
/// one edge so downstream code never sees an empty graph.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    assert!(n >= 2);
    let mut edges = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, w));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    Graph::undirected(n, &edges).expect("valid random graph")
}

/// Random directed graph with arc probability `p`; at least one arc.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    assert!(n >= 2);
    let mut arcs = Vec::new();
    for u in 0..n {
        for w in 0..n {
            if u != w && rng.gen_bool(p) {
                arcs.push((u, w));
            }
        }
    }
    if arcs.is_empty() {
        arcs.push((0, 1));
    }
    Graph::directed(n, &arcs).expect("valid random digraph")
}

/// Calls `f` with every subset of `0..len` of size at most `max_size`,
/// including the empty set. `len` must stay below 31.
pub fn for_each_subset(len: usize, max_size: usize, mut f: impl FnMut(&[usize])) {
    assert!(len < 31);
    for mask in 0u32..(1 << len) {
        if mask.count_ones() as usize > max_size {
            continue;
        }
        let subset: Vec<usize> = (0..len).filter(|i| mask >> i & 1 == 1).collect();
        f(&subset);
    }
}

/// Ground-truth coverage of `v` after wiring `endpoints` straight to `v`:
/// the graph is rebuilt from scratch (undirected edges, or arcs into `v`
/// for digraphs) and coverage is recomputed from plain BFS distances.
pub fn coverage_after_adding(g: &Graph, v: usize, endpoints: &[usize]) -> u64 {
    let mut edges = g.edges();
    for &u in endpoints {
        edges.push((u, v));
    }
    let rebuilt = if g.is_directed() {
        Graph::directed(g.node_count(), &edges)
    } else {
        Graph::undirected(g.node_count(), &edges)
    }
    .expect("rebuilt graph is valid");
    coverage_of(&all_pairs_distances(&rebuilt), v)
}
