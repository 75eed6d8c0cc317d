//! End-to-end S × V queries: reachability through a sampled shortcut or a
//! separator-tree shortcut, and approximate distances through a
//! separator-tree hopset followed by approximate distance products.

use thiserror::Error;

use crate::graph::{integerize_weights, integral_weights, GraphError, VertexSubset, WeightedDiGraph};
use crate::hopset::{
    cohen_hopset, cohen_shortcut, sampling_d_shortcut, tree_hopbound, HopsetError, ShortcutSet,
};
use crate::semiring::{approx_distance_product, bool_matmul, minplus_product, BoolMatrix, DistMatrix, SemiringError, INF};
use crate::separator::DecompositionTree;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("hop target must be at least 1, got {0}")]
    InvalidHopTarget(usize),
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("source set is drawn from a graph with {got} vertices, expected {expected}")]
    SourceMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Hopset(#[from] HopsetError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReachResult {
    /// `rows[i][j]` is set iff `j` is reachable from the `i`-th source.
    pub rows: BoolMatrix,
    pub shortcut_edges: usize,
    /// Boolean products performed, including the one that detected a fixpoint.
    pub products: usize,
}

fn check_sources(g: &WeightedDiGraph, sources: &VertexSubset) -> Result<(), PipelineError> {
    if sources.origin_n() != g.n() {
        return Err(PipelineError::SourceMismatch {
            got: sources.origin_n(),
            expected: g.n(),
        });
    }
    Ok(())
}

/// `A + I` over the graph plus extra edges.
fn reach_matrix(g: &WeightedDiGraph, extra: &[(usize, usize)]) -> BoolMatrix {
    let mut a = BoolMatrix::identity(g.n());
    for (u, v, _) in g.edges() {
        a.set(u, v, true);
    }
    for &(u, v) in extra {
        a.set(u, v, true);
    }
    a
}

/// Multiplies `b` by `a` at most `limit` times, stopping once a product
/// leaves `b` unchanged.
fn iterate_bool(mut b: BoolMatrix, a: &BoolMatrix, limit: usize) -> Result<(BoolMatrix, usize), PipelineError> {
    let mut products = 0;
    while products < limit {
        let next = bool_matmul(&b, a)?;
        products += 1;
        if next == b {
            break;
        }
        b = next;
    }
    Ok((b, products))
}

/// Sampled `d`-shortcut, then rows of `A' = A + I` for the sources multiplied
/// by `A'` up to `d - 1` times.
pub fn direach(
    g: &WeightedDiGraph,
    sources: &VertexSubset,
    d: usize,
    seed: u64,
) -> Result<ReachResult, PipelineError> {
    if d < 1 {
        return Err(PipelineError::InvalidHopTarget(d));
    }
    check_sources(g, sources)?;
    let h = sampling_d_shortcut(g, d, seed)?;
    reach_with_shortcut(g, sources, &h, d - 1)
}

/// Rows of `A' = A + I` over `G ∪ H` for the sources, multiplied by `A'` at
/// most `max_products` times with early exit at a fixpoint.
pub fn reach_with_shortcut(
    g: &WeightedDiGraph,
    sources: &VertexSubset,
    h: &ShortcutSet,
    max_products: usize,
) -> Result<ReachResult, PipelineError> {
    check_sources(g, sources)?;
    let a = reach_matrix(g, &h.edges);
    let b = a.rows_restrict(sources)?;
    let (rows, products) = iterate_bool(b, &a, max_products)?;
    Ok(ReachResult {
        rows,
        shortcut_edges: h.edges.len(),
        products,
    })
}

/// Separator-tree shortcut, then Boolean products until a fixpoint (at most
/// `n` products).
pub fn direach_via_tree(
    g: &WeightedDiGraph,
    sources: &VertexSubset,
    tree: &DecompositionTree,
) -> Result<ReachResult, PipelineError> {
    check_sources(g, sources)?;
    let h = cohen_shortcut(g, tree)?;
    reach_with_shortcut(g, sources, &h, g.n().max(1))
}

/// Stretch budgets of the three approximation stages. A zero budget makes
/// that stage exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxKnobs {
    pub hopset: f64,
    pub integerize: f64,
    pub product: f64,
}

impl ApproxKnobs {
    /// Splits `ε` so that the three stretches multiply to exactly `1 + ε`.
    pub fn even_split(epsilon: f64) -> Self {
        let each = (1.0 + epsilon).cbrt() - 1.0;
        Self {
            hopset: each,
            integerize: each,
            product: each,
        }
    }

    /// No approximation anywhere; needs integral weights.
    pub fn exact() -> Self {
        Self {
            hopset: 0.0,
            integerize: 0.0,
            product: 0.0,
        }
    }

    /// Total stretch bound `(1 + ε_h)(1 + ε_i)(1 + ε_p) - 1`.
    pub fn epsilon(&self) -> f64 {
        (1.0 + self.hopset) * (1.0 + self.integerize) * (1.0 + self.product) - 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceEstimates {
    /// `estimates[i][v]` approximates the distance from the `i`-th source to `v`.
    pub estimates: Vec<Vec<f64>>,
    pub hopset_edges: usize,
    pub hopbound: usize,
    /// `ξ` passed to each approximate product; 0 for exact products.
    pub product_xi: f64,
    /// Distance products performed, including the one that detected a fixpoint.
    pub products: usize,
    pub knobs: ApproxKnobs,
}

/// `(1 + ε)`-approximate distances from every source, with `ε` split evenly
/// between the hopset, weight integerization and the distance products.
pub fn approx_sxv_distances(
    g: &WeightedDiGraph,
    sources: &VertexSubset,
    epsilon: f64,
    tree: &DecompositionTree,
) -> Result<DistanceEstimates, PipelineError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(PipelineError::InvalidEpsilon(epsilon));
    }
    approx_sxv_distances_with(g, sources, ApproxKnobs::even_split(epsilon), tree)
}

pub fn approx_sxv_distances_with(
    g: &WeightedDiGraph,
    sources: &VertexSubset,
    knobs: ApproxKnobs,
    tree: &DecompositionTree,
) -> Result<DistanceEstimates, PipelineError> {
    check_sources(g, sources)?;
    for k in [knobs.hopset, knobs.integerize, knobs.product] {
        if !(k.is_finite() && k >= 0.0) {
            return Err(PipelineError::InvalidEpsilon(k));
        }
    }
    let build = cohen_hopset(g, tree, knobs.hopset)?;
    let augmented = build.hopset.augment(g);
    let ints = if knobs.integerize > 0.0 {
        integerize_weights(&augmented, knobs.integerize)?
    } else {
        integral_weights(&augmented)?
    };

    let n = g.n();
    let mut a = DistMatrix::identity(n);
    for (u, v, w) in ints.graph.edges() {
        if u != v {
            a.set(u, v, w as u64);
        }
    }
    let beta = tree_hopbound(tree);
    // (1 + 4ξ)^β ≤ e^{4ξβ} = 1 + ε_p
    let xi = if knobs.product > 0.0 {
        (1.0 + knobs.product).ln() / (4.0 * beta as f64)
    } else {
        0.0
    };
    let mut b = a.rows_restrict(sources)?;
    let mut products = 0;
    let limit = beta.max(n).max(1);
    while products < limit {
        let step = if xi > 0.0 {
            approx_distance_product(&b, &a, xi)?
        } else {
            minplus_product(&b, &a)?
        };
        products += 1;
        let mut next = b.clone();
        next.min_assign(&step);
        if next == b {
            break;
        }
        b = next;
    }

    let estimates = (0..b.rows())
        .map(|i| {
            b.row(i)
                .iter()
                .map(|&x| if x == INF { f64::INFINITY } else { x as f64 * ints.unit })
                .collect()
        })
        .collect();
    Ok(DistanceEstimates {
        estimates,
        hopset_edges: build.hopset.edges.len(),
        hopbound: beta,
        product_xi: xi,
        products,
        knobs,
    })
}
