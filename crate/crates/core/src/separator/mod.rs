//! Balanced vertex separators of undirected skeletons, the rebalancing and
//! doubly-incident rewrites, and separator decomposition trees.
//!
//! Finders operate on a vertex subset of a [`Skeleton`]; only edges with both
//! endpoints in the subset are considered, so a finder call on `verts` is a
//! call on the induced subgraph.

mod balance;
mod finders;
mod tree;

use thiserror::Error;

use crate::graph::{Skeleton, VertexId, VertexSubset};

pub use balance::{balance_to_half, make_doubly_incident, BalanceOutcome, BalanceStep};
pub use tree::{
    build_decomposition_tree, DecompositionTree, TreeConfig, TreeError, TreeNode,
    DEFAULT_LEAF_THRESHOLD,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeparatorError {
    #[error("separator ratio must lie in (0, 1), got {0}")]
    InvalidRatio(f64),
    #[error("no separator with ratio {lambda} found for {n} vertices")]
    NoBalancedSeparator { n: usize, lambda: f64 },
    #[error("exhaustive search supports at most {max} vertices, got {n}")]
    TooLargeForExhaustive { n: usize, max: usize },
    #[error("exhaustive search exceeded its budget of {0} candidate sets")]
    BudgetExceeded(u64),
    #[error("grid strategy needs a {rows}x{cols} grid skeleton, got {n} vertices")]
    GridShape { rows: usize, cols: usize, n: usize },
    #[error("grid cut is not a separator of this skeleton (edge {0}-{1} crosses)")]
    NotAGrid(VertexId, VertexId),
    #[error("rebalancing made no progress on a set of {0} vertices")]
    NoProgress(usize),
}

/// A separator `sep` of some vertex set together with the two sides.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorResult {
    pub sep: VertexSubset,
    pub part_a: VertexSubset,
    pub part_b: VertexSubset,
    /// `max(|part_a|, |part_b|) / (|sep| + |part_a| + |part_b|)`.
    pub ratio: f64,
}

impl SeparatorResult {
    pub fn new(origin_n: usize, sep: Vec<VertexId>, part_a: Vec<VertexId>, part_b: Vec<VertexId>) -> Self {
        let total = sep.len() + part_a.len() + part_b.len();
        let ratio = if total == 0 {
            0.0
        } else {
            part_a.len().max(part_b.len()) as f64 / total as f64
        };
        let subset = |v: Vec<VertexId>| VertexSubset::new(v, origin_n).expect("vertex in range");
        Self {
            sep: subset(sep),
            part_a: subset(part_a),
            part_b: subset(part_b),
            ratio,
        }
    }

    pub fn total(&self) -> usize {
        self.sep.len() + self.part_a.len() + self.part_b.len()
    }

    /// First skeleton edge joining the two parts, if any.
    pub fn crossing_edge(&self, skel: &Skeleton) -> Option<(VertexId, VertexId)> {
        self.part_a.iter().find_map(|u| {
            skel.neighbors(u)
                .iter()
                .find(|&&v| self.part_b.contains(v))
                .map(|&v| (u, v))
        })
    }

    /// Whether the three sets partition `verts` with no edge between the parts.
    pub fn is_separator_of(&self, skel: &Skeleton, verts: &[VertexId]) -> bool {
        let mut all: Vec<VertexId> = self
            .sep
            .iter()
            .chain(self.part_a.iter())
            .chain(self.part_b.iter())
            .collect();
        all.sort_unstable();
        let mut expected = verts.to_vec();
        expected.sort_unstable();
        expected.dedup();
        all == expected && self.crossing_edge(skel).is_none()
    }
}

/// How [`SeparatorFinder`] searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparatorStrategy {
    /// Minimum-size separator by subset enumeration; smallest sets first.
    Exhaustive,
    /// Staircase cut through a `rows x cols` grid with row-major ids.
    Grid { rows: usize, cols: usize },
    /// Cut along a window of BFS levels of the largest component.
    BfsHeuristic,
}

/// Exhaustive search cap on the number of candidate separators examined.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 4_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorFinder {
    pub strategy: SeparatorStrategy,
    /// Largest allowed part size as a fraction of the input set.
    pub lambda: f64,
    pub exhaustive_budget: u64,
}

impl SeparatorFinder {
    pub fn new(strategy: SeparatorStrategy, lambda: f64) -> Result<Self, SeparatorError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(SeparatorError::InvalidRatio(lambda));
        }
        Ok(Self {
            strategy,
            lambda,
            exhaustive_budget: DEFAULT_EXHAUSTIVE_BUDGET,
        })
    }

    /// Largest part size permitted for a set of `n` vertices.
    pub fn part_limit(&self, n: usize) -> usize {
        (self.lambda * n as f64 + 1e-9).floor() as usize
    }

    /// Separator of the subgraph induced by `verts`.
    pub fn find(&self, skel: &Skeleton, verts: &[VertexId]) -> Result<SeparatorResult, SeparatorError> {
        let mut verts = verts.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let n = skel.n();
        match verts.len() {
            0 => return Ok(SeparatorResult::new(n, vec![], vec![], vec![])),
            1 => return Ok(SeparatorResult::new(n, verts, vec![], vec![])),
            _ => {}
        }
        let result = match self.strategy {
            SeparatorStrategy::Exhaustive => finders::exhaustive(skel, &verts, self)?,
            SeparatorStrategy::Grid { rows, cols } => finders::grid(skel, &verts, rows, cols)?,
            SeparatorStrategy::BfsHeuristic => finders::bfs_levels(skel, &verts, self)?,
        };
        if let Some((u, v)) = result.crossing_edge(skel) {
            return Err(SeparatorError::NotAGrid(u, v));
        }
        let limit = self.part_limit(verts.len());
        if result.part_a.len() > limit || result.part_b.len() > limit {
            return Err(SeparatorError::NoBalancedSeparator {
                n: verts.len(),
                lambda: self.lambda,
            });
        }
        Ok(result)
    }
}

/// Separator of the whole skeleton.
pub fn find_separator(
    skel: &Skeleton,
    strategy: SeparatorStrategy,
    lambda: f64,
) -> Result<SeparatorResult, SeparatorError> {
    let all: Vec<VertexId> = (0..skel.n()).collect();
    SeparatorFinder::new(strategy, lambda)?.find(skel, &all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Skeleton {
        Skeleton::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub(crate) fn grid(rows: usize, cols: usize) -> Skeleton {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Skeleton::from_edges(rows * cols, edges).unwrap()
    }

    #[test]
    fn exhaustive_path5_picks_middle() {
        let r = find_separator(&path(5), SeparatorStrategy::Exhaustive, 2.0 / 3.0).unwrap();
        assert_eq!(r.sep.as_slice(), &[2]);
        assert_eq!(r.part_a.as_slice(), &[0, 1]);
        assert_eq!(r.part_b.as_slice(), &[3, 4]);
    }

    #[test]
    fn grid_4x4_staircase_cut() {
        let g = grid(4, 4);
        let r = find_separator(&g, SeparatorStrategy::Grid { rows: 4, cols: 4 }, 2.0 / 3.0).unwrap();
        assert_eq!(r.sep.len(), 4);
        assert_eq!((r.part_a.len(), r.part_b.len()), (6, 6));
        assert!(r.is_separator_of(&g, &(0..16).collect::<Vec<_>>()));
    }

    #[test]
    fn exhaustive_k4_needs_two() {
        let k4 = Skeleton::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let r = find_separator(&k4, SeparatorStrategy::Exhaustive, 2.0 / 3.0).unwrap();
        assert!(r.sep.len() >= 2);
        assert_eq!(r.sep.len(), 2);
        assert!(r.crossing_edge(&k4).is_none());
    }

    #[test]
    fn exhaustive_matches_brute_force_minimum_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(2..9);
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            let skel = Skeleton::from_edges(n, edges).unwrap();
            let r = find_separator(&skel, SeparatorStrategy::Exhaustive, 2.0 / 3.0).unwrap();
            // brute force over all 3-colourings
            let limit = (2.0 / 3.0 * n as f64 + 1e-9).floor() as usize;
            let mut best = usize::MAX;
            for code in 0..3usize.pow(n as u32) {
                let mut c = code;
                let side: Vec<usize> = (0..n)
                    .map(|_| {
                        let s = c % 3;
                        c /= 3;
                        s
                    })
                    .collect();
                let (a, b) = (
                    side.iter().filter(|&&s| s == 1).count(),
                    side.iter().filter(|&&s| s == 2).count(),
                );
                let ok = a <= limit
                    && b <= limit
                    && skel.edges().all(|(u, v)| side[u] + side[v] != 3);
                if ok {
                    best = best.min(n - a - b);
                }
            }
            assert_eq!(r.sep.len(), best);
        }
    }

    #[test]
    fn bfs_heuristic_separates_grid_and_path() {
        let g = grid(6, 7);
        let all: Vec<_> = (0..42).collect();
        let f = SeparatorFinder::new(SeparatorStrategy::BfsHeuristic, 2.0 / 3.0).unwrap();
        let r = f.find(&g, &all).unwrap();
        assert!(r.is_separator_of(&g, &all));
        assert!(r.ratio <= 2.0 / 3.0);
        let p = path(9);
        let r = f.find(&p, &(0..9).collect::<Vec<_>>()).unwrap();
        assert_eq!(r.sep.len(), 1);
    }

    #[test]
    fn disconnected_input_needs_no_separator() {
        let skel = Skeleton::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        for strategy in [SeparatorStrategy::Exhaustive, SeparatorStrategy::BfsHeuristic] {
            let r = find_separator(&skel, strategy, 2.0 / 3.0).unwrap();
            assert!(r.sep.is_empty());
            assert_eq!((r.part_a.len(), r.part_b.len()), (3, 3));
        }
    }

    #[test]
    fn tiny_inputs() {
        let skel = path(3);
        let f = SeparatorFinder::new(SeparatorStrategy::Exhaustive, 2.0 / 3.0).unwrap();
        let one = f.find(&skel, &[1]).unwrap();
        assert_eq!(one.sep.as_slice(), &[1]);
        assert!(one.part_a.is_empty() && one.part_b.is_empty());
        let none = f.find(&skel, &[]).unwrap();
        assert_eq!(none.total(), 0);
    }

    #[test]
    fn finder_rejects_bad_ratio_and_shape() {
        assert!(SeparatorFinder::new(SeparatorStrategy::Exhaustive, 1.0).is_err());
        let err = find_separator(&path(5), SeparatorStrategy::Grid { rows: 2, cols: 2 }, 0.6);
        assert!(matches!(err, Err(SeparatorError::GridShape { .. })));
    }

    #[test]
    fn induced_subset_ignores_outside_edges() {
        // 0-1-2-3-4 but only {0, 2, 4}: no internal edges
        let f = SeparatorFinder::new(SeparatorStrategy::Exhaustive, 2.0 / 3.0).unwrap();
        let r = f.find(&path(5), &[0, 2, 4]).unwrap();
        assert!(r.sep.is_empty());
    }
}
