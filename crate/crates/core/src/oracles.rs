//! Reference implementations used as ground truth by the test suites.
//!
//! These favour obviousness over speed.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::{VertexId, VertexSubset, WeightedDiGraph};
use crate::semiring::{bool_matmul, BoolMatrix};

/// Default vertex cap for [`transitive_closure`].
pub const DEFAULT_CLOSURE_CAP: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("source {source_vertex} out of range for graph with {n} vertices")]
    SourceOutOfRange { source_vertex: VertexId, n: usize },
    #[error("graph has {n} vertices, above the oracle cap of {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// Per-vertex distances from one source; `f64::INFINITY` marks unreachable.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceVector {
    pub source: VertexId,
    pub dist: Vec<f64>,
}

fn check_source(g: &WeightedDiGraph, s: VertexId) -> Result<(), OracleError> {
    if s >= g.n() {
        Err(OracleError::SourceOutOfRange {
            source_vertex: s,
            n: g.n(),
        })
    } else {
        Ok(())
    }
}

/// Vertices reachable from `s`, including `s`.
pub fn bfs_reach(g: &WeightedDiGraph, s: VertexId) -> Result<VertexSubset, OracleError> {
    check_source(g, s)?;
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        for (v, _) in g.out_edges(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    let members = (0..g.n()).filter(|&v| seen[v]);
    Ok(VertexSubset::new(members, g.n()).expect("members are in range"))
}

struct Key(f64);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Exact single-source distances with a binary heap.
pub fn dijkstra(g: &WeightedDiGraph, s: VertexId) -> Result<DistanceVector, OracleError> {
    check_source(g, s)?;
    let mut dist = vec![f64::INFINITY; g.n()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Reverse((Key(0.0), s)));
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (v, w) in g.out_edges(u) {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((Key(nd), v)));
            }
        }
    }
    Ok(DistanceVector { source: s, dist })
}

/// Bellman–Ford truncated after `k` rounds: shortest paths using at most `k` edges.
pub fn k_bounded_distances(
    g: &WeightedDiGraph,
    s: VertexId,
    k: usize,
) -> Result<DistanceVector, OracleError> {
    check_source(g, s)?;
    let mut dist = vec![f64::INFINITY; g.n()];
    dist[s] = 0.0;
    for _ in 0..k {
        // Jacobi-style round: relax only from last round's values.
        let prev = dist.clone();
        let mut changed = false;
        for (u, v, w) in g.edges() {
            if prev[u].is_finite() && prev[u] + w < dist[v] {
                dist[v] = prev[u] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(DistanceVector { source: s, dist })
}

/// Reachability matrix by repeated Boolean squaring of `A + I`.
pub fn transitive_closure(g: &WeightedDiGraph, cap: usize) -> Result<BoolMatrix, OracleError> {
    let n = g.n();
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    let mut m = BoolMatrix::identity(n);
    for (u, v, _) in g.edges() {
        m.set(u, v, true);
    }
    let mut span = 1usize;
    while span < n.max(1) {
        m = bool_matmul(&m, &m).expect("square");
        span *= 2;
    }
    Ok(m)
}
