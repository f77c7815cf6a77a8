//! Immutable unweighted graphs with dense node ids `0..n`, BFS distances,
//! and *edge patches*: candidate sets of new edges, all incident to one
//! target node, whose effect on distances is evaluated virtually.
//!
//! Distances are `u32` hop counts with a fixed unreachable sentinel of
//! `n + 1`; additions saturate at the sentinel so comparisons stay valid
//! without per-use overflow checks. Every finite distance is at most
//! `n - 1`, so the sentinel never collides with a real path length.
//!
//! The key identity used throughout: for a patch `S` whose edges all touch
//! the target `v`, the patched distance satisfies
//! `d'(s, t) = min(d(s, t), d'(s, v) + d'(v, t))`, because any path using a
//! new edge must pass through `v`. Patched distances to `v` reduce to
//! `d'(s, v) = min(d(s, v), min over endpoints u of d(s, u) + 1)`, which
//! [`augmented_distance_to_target`] computes straight from the base
//! distance matrix.

use rayon::prelude::*;
use std::collections::VecDeque;
use thiserror::Error;

/// Errors from graph construction and traversal.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop at node {0} is not allowed")]
    SelfLoop(usize),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(usize, usize),
}

/// Errors from building an [`EdgePatch`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatchError {
    #[error("patch target {node} out of range for graph with {n} nodes")]
    TargetOutOfRange { node: usize, n: usize },
    #[error("patch endpoint {node} out of range for graph with {n} nodes")]
    EndpointOutOfRange { node: usize, n: usize },
    #[error("patch endpoint {0} equals the target node")]
    EndpointIsTarget(usize),
    #[error("patch endpoint {0} is already adjacent to the target")]
    AlreadyNeighbor(usize),
}

/// An immutable simple graph (or digraph) over nodes `0..n`.
///
/// Adjacency lists are sorted; undirected edges are stored in both lists.
/// No self-loops, no parallel edges.
#[derive(Clone, Debug)]
pub struct Graph {
    directed: bool,
    adj: Vec<Vec<usize>>,
    in_adj: Option<Vec<Vec<usize>>>,
    edge_count: usize,
}

impl Graph {
    /// Builds an undirected graph from an edge list. Rejects loops,
    /// duplicates (in either orientation), and out-of-range endpoints.
    pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, w) in edges {
            for node in [u, w] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if u == w {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(w);
            adj[w].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = first_duplicate(list) {
                return Err(GraphError::DuplicateEdge(u.min(w), u.max(w)));
            }
        }
        Ok(Graph {
            directed: false,
            adj,
            in_adj: None,
            edge_count: edges.len(),
        })
    }

    /// Builds a directed graph from an arc list `(u, w)` meaning `u -> w`.
    pub fn directed(n: usize, arcs: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut in_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, w) in arcs {
            for node in [u, w] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if u == w {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(w);
            in_adj[w].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = first_duplicate(list) {
                return Err(GraphError::DuplicateEdge(u, w));
            }
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Graph {
            directed: true,
            adj,
            in_adj: Some(in_adj),
            edge_count: arcs.len(),
        })
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges (undirected) or arcs (directed).
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Out-neighbors of `u` (all neighbors for undirected graphs), sorted.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    /// In-neighbors of `u`; same as [`Self::neighbors`] for undirected graphs.
    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        match &self.in_adj {
            Some(in_adj) => &in_adj[u],
            None => &self.adj[u],
        }
    }

    /// True when the edge (arc) `u -> w` exists.
    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&w).is_ok()
    }

    /// Sorted edge list; for undirected graphs each edge appears once with
    /// `u < w`, for directed graphs each arc appears as `(u, w)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &w in list {
                if self.directed || u < w {
                    out.push((u, w));
                }
            }
        }
        out
    }

    /// Materializes the graph with the patch's edges added. Used by test
    /// oracles and by rank recomputation; solvers evaluate patches
    /// virtually via [`augmented_distance_to_target`].
    pub fn with_patch(&self, patch: &EdgePatch) -> Graph {
        let mut edges = self.edges();
        for &u in &patch.endpoints {
            // DirectedIncoming adds u -> target; Undirected adds {u, target}.
            edges.push((u, patch.target));
        }
        if self.directed {
            Graph::directed(self.node_count(), &edges).expect("patched graph stays valid")
        } else {
            Graph::undirected(self.node_count(), &edges).expect("patched graph stays valid")
        }
    }
}

fn first_duplicate(sorted: &[usize]) -> Option<usize> {
    sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0])
}

/// Hop distances from every source, row-major, with sentinel `n + 1` for
/// unreachable pairs.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    n: usize,
    sentinel: u32,
    rows: Vec<u32>,
}

impl DistanceMatrix {
    /// Distance from `s` to `t` (`sentinel()` when unreachable).
    #[inline]
    pub fn get(&self, s: usize, t: usize) -> u32 {
        self.rows[s * self.n + t]
    }

    /// The row of distances from source `s`.
    #[inline]
    pub fn row(&self, s: usize) -> &[u32] {
        &self.rows[s * self.n..(s + 1) * self.n]
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// The unreachable marker, `n + 1`.
    #[inline]
    pub fn sentinel(&self) -> u32 {
        self.sentinel
    }

    /// True when `d` encodes a real path.
    #[inline]
    pub fn is_finite(&self, d: u32) -> bool {
        d < self.sentinel
    }

    /// Saturating distance addition: `min(a + b, sentinel)`.
    #[inline]
    pub fn sat_add(&self, a: u32, b: u32) -> u32 {
        (a + b).min(self.sentinel)
    }
}

/// BFS hop distances from `s`, with `n + 1` for unreachable nodes.
pub fn bfs_from(g: &Graph, s: usize) -> Result<Vec<u32>, GraphError> {
    let n = g.node_count();
    if s >= n {
        return Err(GraphError::NodeOutOfRange { node: s, n });
    }
    let sentinel = (n + 1) as u32;
    let mut dist = vec![sentinel; n];
    dist[s] = 0;
    let mut queue = VecDeque::with_capacity(n);
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &w in g.neighbors(u) {
            if dist[w] == sentinel {
                dist[w] = du + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// All-pairs BFS distances (parallel over sources).
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.node_count();
    let sentinel = (n + 1) as u32;
    let mut rows = vec![0u32; n * n];
    rows.par_chunks_mut(n.max(1))
        .enumerate()
        .for_each(|(s, row)| {
            let dist = bfs_from(g, s).expect("source in range");
            row.copy_from_slice(&dist);
        });
    DistanceMatrix { n, sentinel, rows }
}

/// How patch edges attach to the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatchOrientation {
    /// New edges `{u, target}` in an undirected graph.
    Undirected,
    /// New arcs `u -> target` in a digraph; distances from the target are
    /// unaffected.
    DirectedIncoming,
}

/// A validated set of new edges, all incident to one target node.
///
/// Endpoints are sorted, distinct, differ from the target, and are not
/// already adjacent to it (in-adjacent for the directed orientation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePatch {
    target: usize,
    endpoints: Vec<usize>,
    orientation: PatchOrientation,
}

impl EdgePatch {
    /// Validates and builds a patch against `g`. The orientation follows the
    /// graph: undirected graphs get undirected edges, digraphs get incoming
    /// arcs.
    pub fn new(g: &Graph, target: usize, endpoints: &[usize]) -> Result<EdgePatch, PatchError> {
        let n = g.node_count();
        if target >= n {
            return Err(PatchError::TargetOutOfRange { node: target, n });
        }
        let orientation = if g.is_directed() {
            PatchOrientation::DirectedIncoming
        } else {
            PatchOrientation::Undirected
        };
        let mut eps = endpoints.to_vec();
        eps.sort_unstable();
        eps.dedup();
        for &u in &eps {
            if u >= n {
                return Err(PatchError::EndpointOutOfRange { node: u, n });
            }
            if u == target {
                return Err(PatchError::EndpointIsTarget(u));
            }
            let already = match orientation {
                PatchOrientation::Undirected => g.has_edge(target, u),
                PatchOrientation::DirectedIncoming => g.has_edge(u, target),
            };
            if already {
                return Err(PatchError::AlreadyNeighbor(u));
            }
        }
        Ok(EdgePatch {
            target,
            endpoints: eps,
            orientation,
        })
    }

    /// The patch with no edges.
    pub fn empty(g: &Graph, target: usize) -> Result<EdgePatch, PatchError> {
        EdgePatch::new(g, target, &[])
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Sorted, deduplicated endpoints.
    pub fn endpoints(&self) -> &[usize] {
        &self.endpoints
    }

    pub fn orientation(&self) -> PatchOrientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }
}

/// Distance from `s` to the patch target once the patch edges exist:
/// `min(d(s, v), min over endpoints u of d(s, u) + 1)`.
///
/// For undirected graphs the same formula with `s` and `v` swapped gives
/// the distance away from the target; for incoming directed patches,
/// distances from the target are simply the base row of `v`.
pub fn augmented_distance_to_target(d: &DistanceMatrix, patch: &EdgePatch, s: usize) -> u32 {
    let row = d.row(s);
    let mut best = row[patch.target()];
    for &u in patch.endpoints() {
        let via = d.sat_add(row[u], 1);
        if via < best {
            best = via;
        }
    }
    best
}
