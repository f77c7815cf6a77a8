//! Hardness gadgets: graph embeddings whose edge-addition optima encode
//! classic covering problems.
//!
//! [`build_mc_gadget`] embeds a set-cover-style instance so that the
//! coverage gained by connecting the target to *set nodes* grows in
//! lockstep with the number of elements those sets cover — each newly
//! covered element is worth at least `2 * (copies + 1) * t_count` covered
//! node pairs. [`build_dks_gadget`] embeds a graph so that the coverage
//! gained by a patch equals exactly twice the number of edges its
//! endpoints induce in the embedded graph, tying the edge-addition
//! problem to finding dense subgraphs.

use crate::graph::Graph;
use thiserror::Error;

/// Hard ceiling on gadget sizes; the quadratic clique layer explodes fast.
pub const GADGET_NODE_CAP: usize = 200_000;

/// Errors from the gadget builders.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("gadget would need {nodes} nodes, over the {cap} cap")]
    TooLarge { nodes: usize, cap: usize },
    #[error("set {set} references element {element}, universe size is {universe}")]
    ElementOutOfRange { set: usize, element: usize, universe: usize },
    #[error("beta must be at least 1")]
    BetaZero,
    #[error("inner edge ({u}, {w}) invalid for {n} inner nodes")]
    BadInnerEdge { u: usize, w: usize, n: usize },
}

/// A set-cover embedding. Layers, in node-id order:
///
/// * one node per element, duplicated `copies` extra times (identical
///   adjacency), listed in [`Self::element_nodes`];
/// * one node per set ([`Self::set_nodes`]), adjacent to every node of
///   every element it contains;
/// * a hub [`Self::z`] adjacent to all set nodes and the whole clique;
/// * a clique of [`Self::t_count`] nodes, each also adjacent to
///   [`Self::v`].
///
/// Base routes from element nodes to clique nodes run
/// element–set–hub–clique (length 3). A new edge `{v, set_node}` opens the
/// tied route element–set–v–clique for exactly the elements of that set,
/// so each element covered by the chosen sets contributes
/// `2 * (copies + 1) * t_count` covered ordered pairs — see
/// [`Self::pairs_per_element`].
#[derive(Debug, Clone)]
pub struct McGadget {
    pub graph: Graph,
    /// Target for edge additions; adjacent to the clique only.
    pub v: usize,
    /// Hub node between the set layer and the clique.
    pub z: usize,
    /// Node id of each set, index-aligned with the builder's `sets`.
    pub set_nodes: Vec<usize>,
    /// Node ids carrying each element (`copies + 1` per element).
    pub element_nodes: Vec<Vec<usize>>,
    /// Extra duplicates per element.
    pub copies: usize,
    /// Clique size.
    pub t_count: usize,
}

impl McGadget {
    /// Guaranteed covered-pair yield per covered element: ordered pairs
    /// between the element's `copies + 1` nodes and the clique.
    pub fn pairs_per_element(&self) -> u64 {
        2 * (self.copies as u64 + 1) * self.t_count as u64
    }
}

/// Builds the set-cover embedding for `sets` over a universe of
/// `universe` elements, sized for budget `k` with gap parameter `beta`
/// (larger `beta` shrinks the duplicate layer; `beta = 1` is the most
/// conservative). Errors if the gadget would exceed [`GADGET_NODE_CAP`]
/// nodes.
pub fn build_mc_gadget(
    universe: usize,
    sets: &[Vec<usize>],
    k: usize,
    beta: usize,
) -> Result<McGadget, GadgetError> {
    if beta == 0 {
        return Err(GadgetError::BetaZero);
    }
    for (si, set) in sets.iter().enumerate() {
        if let Some(&e) = set.iter().find(|&&e| e >= universe) {
            return Err(GadgetError::ElementOutOfRange {
                set: si,
                element: e,
                universe,
            });
        }
    }
    let f = sets.len();
    let copies = (1 + k + f).div_ceil(beta) - 1;
    let element_layer = universe * (copies + 1);
    let t_count = (f + element_layer + 1).pow(2);
    let nodes = element_layer + f + 1 + t_count + 1;
    if nodes > GADGET_NODE_CAP {
        return Err(GadgetError::TooLarge { nodes, cap: GADGET_NODE_CAP });
    }

    let element_nodes: Vec<Vec<usize>> = (0..universe)
        .map(|e| (e * (copies + 1)..(e + 1) * (copies + 1)).collect())
        .collect();
    let set_nodes: Vec<usize> = (0..f).map(|i| element_layer + i).collect();
    let z = element_layer + f;
    let t_first = z + 1;
    let v = t_first + t_count;

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (si, set) in sets.iter().enumerate() {
        for &e in set {
            for &m in &element_nodes[e] {
                edges.push((m, set_nodes[si]));
            }
        }
    }
    for &s in &set_nodes {
        edges.push((s, z));
    }
    for t in t_first..t_first + t_count {
        edges.push((z, t));
        edges.push((t, v));
    }
    for a in t_first..t_first + t_count {
        for b in a + 1..t_first + t_count {
            edges.push((a, b));
        }
    }
    let graph = Graph::undirected(nodes, &edges).expect("gadget layers never collide");
    Ok(McGadget {
        graph,
        v,
        z,
        set_nodes,
        element_nodes,
        copies,
        t_count,
    })
}

/// A dense-subgraph embedding: the inner nodes `0..inner_n`, one apex
/// [`Self::x`] adjacent to everything, and the target [`Self::v`] whose
/// only base edge is `{x, v}`. Inner nodes are joined by the *complement*
/// of the embedded graph's edges, so two inner nodes sit at distance 1
/// when the embedded graph lacks that edge and at distance 2 (via the
/// apex) when it has it. A patch on `v` with endpoints `S ⊆ 0..inner_n`
/// then covers exactly `2 * |edges induced by S in the embedded graph|`
/// pairs: the route `u–v–w` (length 2) ties the apex route precisely for
/// embedded edges.
#[derive(Debug, Clone)]
pub struct DksGadget {
    pub graph: Graph,
    /// Target for edge additions.
    pub v: usize,
    /// Apex node; a base neighbor of `v`, so never a valid endpoint.
    pub x: usize,
    /// Number of embedded (inner) nodes.
    pub inner_n: usize,
}

/// Builds the dense-subgraph embedding of the graph on `inner_n` nodes
/// with edge list `inner_edges`.
pub fn build_dks_gadget(
    inner_n: usize,
    inner_edges: &[(usize, usize)],
) -> Result<DksGadget, GadgetError> {
    for &(u, w) in inner_edges {
        if u >= inner_n || w >= inner_n || u == w {
            return Err(GadgetError::BadInnerEdge { u, w, n: inner_n });
        }
    }
    let nodes = inner_n + 2;
    if nodes > GADGET_NODE_CAP {
        return Err(GadgetError::TooLarge { nodes, cap: GADGET_NODE_CAP });
    }
    let x = inner_n;
    let v = inner_n + 1;
    let has: std::collections::HashSet<(usize, usize)> = inner_edges
        .iter()
        .map(|&(u, w)| (u.min(w), u.max(w)))
        .collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for u in 0..inner_n {
        for w in u + 1..inner_n {
            if !has.contains(&(u, w)) {
                edges.push((u, w));
            }
        }
        edges.push((u, x));
    }
    edges.push((x, v));
    let graph = Graph::undirected(nodes, &edges).expect("complement edges are simple");
    Ok(DksGadget { graph, v, x, inner_n })
}
