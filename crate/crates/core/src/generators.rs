//! Deterministic graph generators for experiments and counterexamples.
//!
//! All randomness flows from caller-provided seeds through a fixed-stream
//! generator, so every builder returns the same graph for the same inputs
//! on every platform.

use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use thiserror::Error;

/// Errors from the generators.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("preferential attachment needs 1 <= attach_m < n, got n={n} attach_m={attach_m}")]
    InvalidAttachment { n: usize, attach_m: usize },
    #[error("degree sequence sums to {sum}, which is odd")]
    OddStubSum { sum: usize },
    #[error("node {node} wants degree {degree}, impossible among {n} nodes")]
    DegreeTooLarge { node: usize, degree: usize, n: usize },
    #[error("no degree sequence hit the edge target within {attempts} attempts")]
    TargetUnreachable { attempts: usize },
}

/// Preferential attachment: a clique on the first `attach_m + 1` nodes,
/// then each new node attaches to `attach_m` distinct existing nodes
/// sampled proportionally to degree (duplicate draws are rerolled).
///
/// The result is connected with `C(attach_m+1, 2) + (n - attach_m - 1) *
/// attach_m` edges and minimum degree `attach_m`.
pub fn barabasi_albert(n: usize, attach_m: usize, seed: u64) -> Result<Graph, GenError> {
    if attach_m < 1 || n <= attach_m {
        return Err(GenError::InvalidAttachment { n, attach_m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for u in 0..=attach_m {
        for w in u + 1..=attach_m {
            edges.push((u, w));
        }
    }
    // Every edge contributes both endpoints, so uniform draws from the
    // pool are degree-proportional.
    let mut pool: Vec<usize> = edges.iter().flat_map(|&(u, w)| [u, w]).collect();
    let mut targets: Vec<usize> = Vec::with_capacity(attach_m);
    for x in attach_m + 1..n {
        targets.clear();
        while targets.len() < attach_m {
            let t = pool[rng.gen_range(0..pool.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, x));
            pool.push(t);
            pool.push(x);
        }
    }
    Ok(Graph::undirected(n, &edges).expect("attachment never repeats an edge"))
}

/// Configuration model: pairs degree stubs uniformly at random, reshuffling
/// up to 100 times to find a simple pairing; if none appears, self-loops
/// and duplicate pairs from the final shuffle are erased. Returns the graph
/// and the number of erased stub pairs, so degrees are exact whenever the
/// second component is zero.
pub fn configuration_model(degrees: &[usize], seed: u64) -> Result<(Graph, usize), GenError> {
    let n = degrees.len();
    let sum: usize = degrees.iter().sum();
    if sum % 2 != 0 {
        return Err(GenError::OddStubSum { sum });
    }
    if let Some((node, &degree)) = degrees.iter().enumerate().find(|&(_, &d)| d + 1 > n) {
        return Err(GenError::DegreeTooLarge { node, degree, n });
    }
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| std::iter::repeat(i).take(d))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for _ in 0..=100 {
        for i in (1..stubs.len()).rev() {
            let j = rng.gen_range(0..=i);
            stubs.swap(i, j);
        }
        pairs = stubs
            .chunks_exact(2)
            .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
            .collect();
        let mut sorted = pairs.clone();
        sorted.sort_unstable();
        let simple = sorted.windows(2).all(|w| w[0] != w[1])
            && sorted.iter().all(|&(u, w)| u != w);
        if simple {
            break;
        }
    }
    let mut seen = HashSet::new();
    let mut kept: Vec<(usize, usize)> = Vec::new();
    let mut erased = 0usize;
    for (u, w) in pairs {
        if u == w || !seen.insert((u, w)) {
            erased += 1;
        } else {
            kept.push((u, w));
        }
    }
    let g = Graph::undirected(n, &kept).expect("offending pairs were erased");
    Ok((g, erased))
}

/// Truncated discrete power law `P(d) ∝ d^-2.5` on `d_min..=n-1`, with
/// `d_min` chosen so the expected stub total sits closest to
/// `2 * target_edges`. Sequences are resampled until the stub total is
/// even and within ±10% of that target, then handed to
/// [`configuration_model`]. Errors if no sequence qualifies within 2000
/// attempts.
pub fn power_law_configuration(
    n: usize,
    target_edges: usize,
    seed: u64,
) -> Result<(Graph, usize), GenError> {
    const EXPONENT: f64 = 2.5;
    const ATTEMPTS: usize = 2000;
    let d_max = n.saturating_sub(1).max(1);
    let target_stubs = 2 * target_edges;

    let truncated_mean = |d_min: usize| -> f64 {
        let mut z = 0.0;
        let mut mass = 0.0;
        for d in d_min..=d_max {
            let w = (d as f64).powf(-EXPONENT);
            z += w;
            mass += w * d as f64;
        }
        mass / z
    };
    let d_min = (1..=d_max)
        .min_by(|&a, &b| {
            let ga = (truncated_mean(a) * n as f64 - target_stubs as f64).abs();
            let gb = (truncated_mean(b) * n as f64 - target_stubs as f64).abs();
            ga.partial_cmp(&gb).unwrap()
        })
        .unwrap();

    let mut cumulative: Vec<f64> = Vec::with_capacity(d_max - d_min + 1);
    let mut acc = 0.0;
    for d in d_min..=d_max {
        acc += (d as f64).powf(-EXPONENT);
        cumulative.push(acc);
    }
    let total = acc;

    let lo = (0.9 * target_stubs as f64).ceil() as usize;
    let hi = (1.1 * target_stubs as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees = vec![0usize; n];
    for _ in 0..ATTEMPTS {
        for slot in degrees.iter_mut() {
            let r = rng.gen_range(0.0..total);
            let idx = cumulative.partition_point(|&c| c <= r);
            *slot = d_min + idx.min(cumulative.len() - 1);
        }
        let sum: usize = degrees.iter().sum();
        if sum % 2 == 0 && (lo..=hi).contains(&sum) {
            return configuration_model(&degrees, rng.gen());
        }
    }
    Err(GenError::TargetUnreachable { attempts: ATTEMPTS })
}

fn chain(edges: &mut Vec<(usize, usize)>, next: &mut usize, from: usize, to: usize, len: usize) {
    debug_assert!(len >= 1);
    let mut prev = from;
    for _ in 0..len - 1 {
        let mid = *next;
        *next += 1;
        edges.push((prev, mid));
        prev = mid;
    }
    edges.push((prev, to));
}

/// A 31-node witness that the undirected objective is not submodular:
/// returns `(graph, v, p, q)` where the single-edge patches `{v,p}` and
/// `{v,q}` have equal coverage gains, yet the two-edge patch gains
/// strictly more than their sum.
///
/// Layout: `v` hangs off a junction node `j`; two mirrored three-node
/// tails (`p` side and `q` side) attach via long connectors `j ↔ a` and
/// `j ↔ b` (9 edges each), and a slightly shorter bridge `a ↔ b` (8
/// edges) joins the tails directly. One new edge only re-routes pairs on
/// its own side, but the two together open cross-side routes through `v`
/// that beat the bridge, so the pair of edges is worth more than its
/// parts.
pub fn nonsubmodular_gadget() -> (Graph, usize, usize, usize) {
    const CONNECTOR: usize = 9;
    const BRIDGE: usize = 8;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut next = 0usize;
    let fresh = |next: &mut usize| {
        let id = *next;
        *next += 1;
        id
    };
    let v = fresh(&mut next);
    let j = fresh(&mut next);
    let a1 = fresh(&mut next);
    let a2 = fresh(&mut next);
    let p = fresh(&mut next);
    let b1 = fresh(&mut next);
    let b2 = fresh(&mut next);
    let q = fresh(&mut next);
    edges.push((v, j));
    edges.push((a1, a2));
    edges.push((a2, p));
    edges.push((b1, b2));
    edges.push((b2, q));
    chain(&mut edges, &mut next, j, a1, CONNECTOR);
    chain(&mut edges, &mut next, j, b1, CONNECTOR);
    chain(&mut edges, &mut next, a1, b1, BRIDGE);
    let g = Graph::undirected(next, &edges).expect("gadget edges are simple");
    (g, v, p, q)
}
