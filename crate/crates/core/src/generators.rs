//! Seeded graph families for tests, benchmarks and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Skeleton, VertexId, WeightedDiGraph};

/// How edge weights are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    Unit,
    /// Uniform integers in `1..=max`.
    Integer { max: u32 },
    /// Uniform reals in `[1, max]`.
    Real { max: f64 },
}

impl WeightSpec {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            WeightSpec::Unit => 1.0,
            WeightSpec::Integer { max } => rng.gen_range(1..=max.max(1)) as f64,
            WeightSpec::Real { max } => {
                if max > 1.0 {
                    rng.gen_range(1.0..=max)
                } else {
                    1.0
                }
            }
        }
    }
}

fn weighted(
    n: usize,
    pairs: Vec<(VertexId, VertexId)>,
    weights: WeightSpec,
    rng: &mut ChaCha8Rng,
) -> WeightedDiGraph {
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, weights.draw(rng)))
        .collect();
    WeightedDiGraph::from_edges(n, edges).expect("generated edges are valid")
}

/// Uniform random digraph with `round(n^mu)` distinct non-loop edges
/// (capped at `n (n - 1)`).
pub fn random_digraph(n: usize, mu: f64, weights: WeightSpec, seed: u64) -> WeightedDiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = n * n.saturating_sub(1);
    let m = ((n as f64).powf(mu).round() as usize).min(cap);
    let pairs: Vec<(VertexId, VertexId)> = if 2 * m > cap {
        let mut all: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        all.shuffle(&mut rng);
        all.truncate(m);
        all
    } else {
        let mut seen = std::collections::HashSet::with_capacity(m);
        let mut out = Vec::with_capacity(m);
        while out.len() < m {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v && seen.insert((u, v)) {
                out.push((u, v));
            }
        }
        out
    };
    weighted(n, pairs, weights, &mut rng)
}

pub fn path(n: usize) -> WeightedDiGraph {
    WeightedDiGraph::from_unweighted(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

pub fn cycle(n: usize) -> WeightedDiGraph {
    WeightedDiGraph::from_unweighted(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

/// `rows x cols` grid with row-major ids. Each undirected grid edge is
/// oriented forward, backward or both at random.
pub fn grid_digraph(rows: usize, cols: usize, weights: WeightSpec, seed: u64) -> WeightedDiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            let mut nbrs = Vec::new();
            if c + 1 < cols {
                nbrs.push(v + 1);
            }
            if r + 1 < rows {
                nbrs.push(v + cols);
            }
            for u in nbrs {
                match rng.gen_range(0..3) {
                    0 => pairs.push((v, u)),
                    1 => pairs.push((u, v)),
                    _ => pairs.extend([(v, u), (u, v)]),
                }
            }
        }
    }
    weighted(rows * cols, pairs, weights, &mut rng)
}

/// Layered DAG: each vertex links to each vertex of the next layer with probability `p`.
pub fn dag_layers(layers: usize, width: usize, p: f64, seed: u64) -> WeightedDiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for l in 0..layers.saturating_sub(1) {
        for i in 0..width {
            for j in 0..width {
                if rng.gen_bool(p) {
                    pairs.push((l * width + i, (l + 1) * width + j));
                }
            }
        }
    }
    weighted(layers * width, pairs, WeightSpec::Unit, &mut rng)
}

/// Random DAG: each forward pair `(u, v)`, `u < v`, present with probability `p`.
pub fn random_dag(n: usize, p: f64, seed: u64) -> WeightedDiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    weighted(n, pairs, WeightSpec::Unit, &mut rng)
}

/// Connected undirected graph: a random spanning tree plus `extra` random edges.
pub fn random_connected_skeleton(n: usize, extra: usize, seed: u64) -> Skeleton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(VertexId, VertexId)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    if n >= 2 {
        for _ in 0..extra {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v {
                edges.push((u, v));
            }
        }
    }
    Skeleton::from_edges(n, edges).expect("generated edges are valid")
}

/// Random orientation of a connected skeleton with sparse extra edges.
pub fn random_sparse_digraph(n: usize, extra: usize, weights: WeightSpec, seed: u64) -> WeightedDiGraph {
    let skel = random_connected_skeleton(n, extra, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut pairs = Vec::new();
    for (u, v) in skel.edges() {
        match rng.gen_range(0..3) {
            0 => pairs.push((u, v)),
            1 => pairs.push((v, u)),
            _ => pairs.extend([(u, v), (v, u)]),
        }
    }
    weighted(n, pairs, weights, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_counts_follow_density() {
        let g = random_digraph(50, 1.5, WeightSpec::Unit, 1);
        assert_eq!(g.m(), 354);
        let dense = random_digraph(20, 2.0, WeightSpec::Unit, 1);
        assert_eq!(dense.m(), 380);
    }

    #[test]
    fn seeds_reproduce() {
        let w = WeightSpec::Real { max: 1000.0 };
        assert_eq!(random_digraph(30, 1.5, w, 9), random_digraph(30, 1.5, w, 9));
        assert_ne!(random_digraph(30, 1.5, w, 9), random_digraph(30, 1.5, w, 10));
    }

    #[test]
    fn weights_in_range() {
        let g = random_digraph(40, 1.7, WeightSpec::Integer { max: 1000 }, 3);
        assert!(g.is_integral());
        assert!(g.edges().all(|(_, _, w)| (1.0..=1000.0).contains(&w)));
        assert!(g.aspect_ratio() <= 1000.0);
    }

    #[test]
    fn skeleton_is_connected() {
        let s = random_connected_skeleton(30, 10, 4);
        let mut seen = [false; 30];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in s.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn structured_shapes() {
        assert_eq!(path(5).m(), 4);
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(dag_layers(3, 4, 1.0, 0).m(), 32);
        let grid = grid_digraph(3, 4, WeightSpec::Unit, 0);
        assert_eq!(grid.skeleton().edge_count(), 17);
    }
}
