//! Diameter-reducing edge sets: randomized D-shortcuts for arbitrary digraphs
//! and separator-tree shortcuts and hopsets.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{VertexId, VertexSubset, WeightedDiGraph};
use crate::oracles::{dijkstra, k_bounded_distances};
use crate::separator::{DecompositionTree, TreeError};

/// Largest vertex count accepted by [`node_apasp`] and the dense per-node steps.
pub const DEFAULT_NODE_CAP: usize = 4096;

/// Pivot sampling constant of [`sampling_d_shortcut`].
pub const PIVOT_CONSTANT: f64 = 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopsetError {
    #[error("hop target must be at least 1, got {0}")]
    InvalidHopTarget(usize),
    #[error("stretch parameter must be finite and non-negative, got {0}")]
    InvalidEpsilon(f64),
    #[error("node subproblem has {size} vertices, above the cap of {cap}")]
    NodeTooLarge { size: usize, cap: usize },
    #[error("negative or non-finite weight {0} in a node subproblem")]
    NegativeWeight(f64),
    #[error("node {node} has no child estimate for pair ({u}, {v})")]
    MissingEstimate { node: usize, u: VertexId, v: VertexId },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Unweighted shortcut edges meant to bring the hop diameter down to `target_hopbound`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortcutSet {
    pub edges: Vec<(VertexId, VertexId)>,
    pub target_hopbound: usize,
}

impl ShortcutSet {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (u, v) in &self.edges {
            writeln!(out, "{u} {v}").expect("string write");
        }
        out
    }
}

/// Weighted hopset edges; every weight is the length of some path in the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct HopsetSet {
    pub edges: Vec<(VertexId, VertexId, f64)>,
    pub epsilon: f64,
    pub hopbound: usize,
}

impl HopsetSet {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (u, v, w) in &self.edges {
            writeln!(out, "{u} {v} {w}").expect("string write");
        }
        out
    }

    /// The graph with the hopset edges added (parallel edges keep the minimum).
    pub fn augment(&self, g: &WeightedDiGraph) -> WeightedDiGraph {
        g.with_extra_edges(self.edges.iter().copied())
            .expect("hopset edges are valid")
    }
}

fn reach_from(n: usize, s: VertexId, next: impl Fn(VertexId) -> Vec<VertexId>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        for v in next(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Sampled pivots with edges from every vertex that reaches a pivot and to
/// every vertex a pivot reaches. A path of more than `d` hops contains a pivot
/// with high probability and is then covered by two shortcut hops.
pub fn sampling_d_shortcut(
    g: &WeightedDiGraph,
    d: usize,
    seed: u64,
) -> Result<ShortcutSet, HopsetError> {
    if d < 1 {
        return Err(HopsetError::InvalidHopTarget(d));
    }
    let n = g.n();
    let mut edges = Vec::new();
    if d + 1 < n {
        let want = (PIVOT_CONSTANT * n as f64 * (n as f64).ln() / d as f64).ceil() as usize;
        let k = want.clamp(1, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pivots = rand::seq::index::sample(&mut rng, n, k).into_vec();
        pivots.sort_unstable();
        let per_pivot: Vec<Vec<(VertexId, VertexId)>> = pivots
            .par_iter()
            .map(|&p| {
                let fwd = reach_from(n, p, |u| g.out_edges(u).map(|(v, _)| v).collect());
                let bwd = reach_from(n, p, |u| g.in_edges(u).map(|(v, _)| v).collect());
                let mut out = Vec::new();
                for v in 0..n {
                    if v == p {
                        continue;
                    }
                    if bwd[v] && !g.has_edge(v, p) {
                        out.push((v, p));
                    }
                    if fwd[v] && !g.has_edge(p, v) {
                        out.push((p, v));
                    }
                }
                out
            })
            .collect();
        edges = per_pivot.into_iter().flatten().collect();
        edges.sort_unstable();
        edges.dedup();
    }
    Ok(ShortcutSet {
        edges,
        target_hopbound: d,
    })
}

fn hop_counts(n: usize, s: VertexId, adj: &[Vec<VertexId>]) -> Vec<usize> {
    let mut hops = vec![usize::MAX; n];
    let mut queue = VecDeque::from([s]);
    hops[s] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if hops[v] == usize::MAX {
                hops[v] = hops[u] + 1;
                queue.push_back(v);
            }
        }
    }
    hops
}

fn union_adjacency(g: &WeightedDiGraph, extra: &[(VertexId, VertexId)]) -> Vec<Vec<VertexId>> {
    let mut adj: Vec<Vec<VertexId>> = (0..g.n())
        .map(|u| g.out_edges(u).map(|(v, _)| v).collect())
        .collect();
    for &(u, v) in extra {
        adj[u].push(v);
    }
    adj
}

/// Largest hop distance in `G ∪ H` over pairs `(u, v)` with `v` reachable
/// from `u` in `G`, or `None` if some such pair is not reachable in `G ∪ H`.
/// Pairs reachable only through `H` are ignored.
pub fn hop_diameter(g: &WeightedDiGraph, extra: &[(VertexId, VertexId)]) -> Option<usize> {
    let n = g.n();
    let plain = union_adjacency(g, &[]);
    let joined = union_adjacency(g, extra);
    (0..n)
        .into_par_iter()
        .map(|s| {
            let base = hop_counts(n, s, &plain);
            let hops = hop_counts(n, s, &joined);
            (0..n)
                .filter(|&v| base[v] != usize::MAX)
                .map(|v| (hops[v] != usize::MAX).then_some(hops[v]))
                .try_fold(0usize, |acc, h| h.map(|h| acc.max(h)))
        })
        .collect::<Option<Vec<usize>>>()
        .map(|v| v.into_iter().max().unwrap_or(0))
}

/// Whether every pair reachable in `G` is joined by a path of at most `d`
/// hops in `G ∪ H`.
pub fn verify_hop_diameter(g: &WeightedDiGraph, h: &ShortcutSet, d: usize) -> bool {
    hop_diameter(g, &h.edges).is_some_and(|diam| diam <= d)
}

/// Row-major square table of distances; `f64::INFINITY` marks unreachable.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseDistances {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseDistances {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Smallest power of `1 + xi` that is at least `d`, capped at `(1 + xi) * d`.
fn round_up(d: f64, xi: f64) -> f64 {
    if xi == 0.0 || d == 0.0 || !d.is_finite() {
        return d;
    }
    let base = 1.0 + xi;
    let mut v = base.powf((d.ln() / base.ln()).ceil());
    while v < d {
        v *= base;
    }
    v.min(d * base).max(d)
}

/// All-pairs shortest paths on a dense weight table, then every value rounded
/// up to the `1 + xi` grid. This stands in for an approximate all-pairs oracle
/// with stretch `1 + xi`.
fn apasp_dense(n: usize, mut w: Vec<f64>, xi: f64, cap: usize) -> Result<DenseDistances, HopsetError> {
    if n > cap {
        return Err(HopsetError::NodeTooLarge { size: n, cap });
    }
    if let Some(&bad) = w.iter().find(|&&x| x.is_nan() || x < 0.0) {
        return Err(HopsetError::NegativeWeight(bad));
    }
    for i in 0..n {
        w[i * n + i] = 0.0;
    }
    for k in 0..n {
        let row_k: Vec<f64> = w[k * n..(k + 1) * n].to_vec();
        for i in 0..n {
            let dik = w[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            let row_i = &mut w[i * n..(i + 1) * n];
            for (x, &dkj) in row_i.iter_mut().zip(&row_k) {
                let cand = dik + dkj;
                if cand < *x {
                    *x = cand;
                }
            }
        }
    }
    if xi > 0.0 {
        for x in &mut w {
            *x = round_up(*x, xi);
        }
    }
    Ok(DenseDistances { n, data: w })
}

/// Approximate all-pairs distances of a small graph: exact for `xi = 0`,
/// otherwise every value `v` satisfies `d <= v <= (1 + xi) d`.
pub fn node_apasp(gt: &WeightedDiGraph, xi: f64) -> Result<DenseDistances, HopsetError> {
    let n = gt.n();
    if n > DEFAULT_NODE_CAP {
        return Err(HopsetError::NodeTooLarge {
            size: n,
            cap: DEFAULT_NODE_CAP,
        });
    }
    let mut w = vec![f64::INFINITY; n * n];
    for (u, v, x) in gt.edges() {
        let cell = &mut w[u * n + v];
        *cell = cell.min(x);
    }
    apasp_dense(n, w, xi, DEFAULT_NODE_CAP)
}

/// Distance estimates `δ_t` held by one tree node over its pair set:
/// `S(t) × S(t) ∪ B(t) × B(t)` at internal nodes, `V(t) × V(t)` at leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeEstimates {
    pub node: usize,
    /// Sorted vertices the table is indexed by.
    pub keys: Vec<VertexId>,
    pub in_sep: Vec<bool>,
    pub in_boundary: Vec<bool>,
    /// Leaf tables cover every key pair.
    pub all_pairs: bool,
    /// Row-major `keys.len()` square table.
    pub table: Vec<f64>,
}

impl NodeEstimates {
    fn index(&self, v: VertexId) -> Option<usize> {
        self.keys.binary_search(&v).ok()
    }

    fn covers(&self, i: usize, j: usize) -> bool {
        self.all_pairs || (self.in_sep[i] && self.in_sep[j]) || (self.in_boundary[i] && self.in_boundary[j])
    }

    /// Estimate for `(u, v)` if the pair belongs to this node's pair set.
    pub fn get(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let (i, j) = (self.index(u)?, self.index(v)?);
        self.covers(i, j).then(|| self.table[i * self.keys.len() + j])
    }

    /// Every covered ordered pair `(u, v, δ)` with `u != v`.
    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        let k = self.keys.len();
        (0..k).flat_map(move |i| {
            (0..k)
                .filter(move |&j| i != j && self.covers(i, j))
                .map(move |j| (self.keys[i], self.keys[j], self.table[i * k + j]))
        })
    }
}

fn flags(keys: &[VertexId], set: &VertexSubset) -> Vec<bool> {
    keys.iter().map(|&v| set.contains(v)).collect()
}

/// Leaf estimates: approximate all-pairs distances inside `G(t)`.
pub fn leaf_estimates(
    g: &WeightedDiGraph,
    tree: &DecompositionTree,
    t: usize,
    xi: f64,
) -> Result<NodeEstimates, HopsetError> {
    let node = &tree.nodes[t];
    let (gt, _) = g.induced_subgraph(&node.vset).map_err(|e| {
        HopsetError::Tree(TreeError::Invalid {
            node: t,
            reason: e.to_string(),
        })
    })?;
    let dist = node_apasp(&gt, xi)?;
    let keys = node.vset.as_slice().to_vec();
    Ok(NodeEstimates {
        node: t,
        in_sep: flags(&keys, &node.sep),
        in_boundary: flags(&keys, &node.boundary),
        keys,
        all_pairs: true,
        table: dist.data,
    })
}

/// Combines the children's estimates into `δ_t`.
///
/// Step 1 runs the approximate all-pairs oracle on the complete digraph over
/// `S(t)` weighted by the smaller child estimate. Step 2 runs it on the graph
/// over `B(t) ∪ S(t)` whose `S × S` edges carry the step-1 values and whose
/// edges between a boundary vertex and a separator vertex carry the estimate
/// of the child holding the boundary vertex. Each output pair takes the
/// minimum of every estimate that applies to it.
pub fn process_node(
    tree: &DecompositionTree,
    t: usize,
    children: [&NodeEstimates; 2],
    xi: f64,
) -> Result<NodeEstimates, HopsetError> {
    let node = &tree.nodes[t];
    let [c1, c2] = node.children.ok_or_else(|| {
        HopsetError::Tree(TreeError::Invalid {
            node: t,
            reason: "process_node called on a leaf".into(),
        })
    })?;
    let child_sets = [&tree.nodes[c1].vset, &tree.nodes[c2].vset];
    let missing = |u, v| HopsetError::MissingEstimate { node: t, u, v };
    let child_est = |i: usize, u: VertexId, v: VertexId| children[i].get(u, v).ok_or(missing(u, v));

    let sep = node.sep.as_slice();
    let s = sep.len();
    let mut w_s = vec![f64::INFINITY; s * s];
    for (i, &u) in sep.iter().enumerate() {
        for (j, &v) in sep.iter().enumerate() {
            w_s[i * s + j] = child_est(0, u, v)?.min(child_est(1, u, v)?);
        }
    }
    let delta_s = apasp_dense(s, w_s, xi, DEFAULT_NODE_CAP)?;

    let keys: Vec<VertexId> = {
        let mut k: Vec<VertexId> = node.boundary.iter().chain(node.sep.iter()).collect();
        k.sort_unstable();
        k.dedup();
        k
    };
    let in_sep = flags(&keys, &node.sep);
    let in_boundary = flags(&keys, &node.boundary);
    let k = keys.len();
    let sep_pos = |v: VertexId| node.sep.position(v);
    // child whose part U_i holds a non-separator vertex
    let home = |v: VertexId| if child_sets[0].contains(v) { 0 } else { 1 };

    let mut w_bs = vec![f64::INFINITY; k * k];
    for (i, &u) in keys.iter().enumerate() {
        for (j, &v) in keys.iter().enumerate() {
            let w = match (sep_pos(u), sep_pos(v)) {
                (Some(a), Some(b)) => delta_s.get(a, b),
                (None, Some(_)) => child_est(home(u), u, v)?,
                (Some(_), None) => child_est(home(v), u, v)?,
                (None, None) => continue,
            };
            w_bs[i * k + j] = w;
        }
    }
    let delta_bs = apasp_dense(k, w_bs, xi, DEFAULT_NODE_CAP)?;

    let mut table = delta_bs.data;
    for (i, &u) in keys.iter().enumerate() {
        for (j, &v) in keys.iter().enumerate() {
            let cell = &mut table[i * k + j];
            if let (Some(a), Some(b)) = (sep_pos(u), sep_pos(v)) {
                *cell = cell.min(delta_s.get(a, b));
            }
            for (c, set) in child_sets.iter().enumerate() {
                if set.contains(u) && set.contains(v) {
                    *cell = cell.min(child_est(c, u, v)?);
                }
            }
        }
    }
    Ok(NodeEstimates {
        node: t,
        keys,
        in_sep,
        in_boundary,
        all_pairs: false,
        table,
    })
}

/// Per-node oracle stretch: `ε / (6 (depth + 1))` for `ε <= 1`, which keeps
/// `(1 + ξ)^{3 (depth + 1)} <= 1 + ε`; for larger `ε` the logarithmic form
/// `ln(1 + ε) / (3 (depth + 1))` gives the same guarantee.
pub fn node_xi(epsilon: f64, depth: usize) -> f64 {
    let levels = (depth + 1) as f64;
    if epsilon <= 1.0 {
        epsilon / (6.0 * levels)
    } else {
        (1.0 + epsilon).ln() / (3.0 * levels)
    }
}

/// Hop budget used with tree-based shortcuts and hopsets.
pub fn tree_hopbound(tree: &DecompositionTree) -> usize {
    2 * tree.depth() + 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopsetBuild {
    pub hopset: HopsetSet,
    /// Indexed by tree node id.
    pub estimates: Vec<NodeEstimates>,
    pub xi_node: f64,
    pub depth: usize,
}

/// Builds the separator-tree hopset: leaves bottom-up with [`leaf_estimates`],
/// internal nodes with [`process_node`], then every covered pair of every node
/// becomes an edge weighted by its estimate. Nodes of one level run in parallel.
pub fn cohen_hopset(
    g: &WeightedDiGraph,
    tree: &DecompositionTree,
    epsilon: f64,
) -> Result<HopsetBuild, HopsetError> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(HopsetError::InvalidEpsilon(epsilon));
    }
    tree.validate(&g.skeleton())?;
    let depth = tree.depth();
    let xi = node_xi(epsilon, depth);

    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); depth + 1];
    for (t, node) in tree.nodes.iter().enumerate() {
        by_level[node.level].push(t);
    }
    let mut done: Vec<Option<NodeEstimates>> = vec![None; tree.nodes.len()];
    for level in by_level {
        let results: Vec<Result<NodeEstimates, HopsetError>> = level
            .par_iter()
            .map(|&t| match tree.nodes[t].children {
                None => leaf_estimates(g, tree, t, xi),
                Some([a, b]) => {
                    let ca = done[a].as_ref().expect("children processed first");
                    let cb = done[b].as_ref().expect("children processed first");
                    process_node(tree, t, [ca, cb], xi)
                }
            })
            .collect();
        for (t, r) in level.into_iter().zip(results) {
            done[t] = Some(r?);
        }
    }
    let estimates: Vec<NodeEstimates> = done
        .into_iter()
        .map(|e| e.expect("every node processed"))
        .collect();

    let mut best: BTreeMap<(VertexId, VertexId), f64> = BTreeMap::new();
    for est in &estimates {
        for (u, v, w) in est.pairs() {
            if w.is_finite() {
                best.entry((u, v))
                    .and_modify(|cur| *cur = cur.min(w))
                    .or_insert(w);
            }
        }
    }
    Ok(HopsetBuild {
        hopset: HopsetSet {
            edges: best.into_iter().map(|((u, v), w)| (u, v, w)).collect(),
            epsilon,
            hopbound: tree_hopbound(tree),
        },
        estimates,
        xi_node: xi,
        depth,
    })
}

/// Separator-tree shortcut: the exact hopset of the unit-weighted graph with
/// weights dropped.
pub fn cohen_shortcut(
    g: &WeightedDiGraph,
    tree: &DecompositionTree,
) -> Result<ShortcutSet, HopsetError> {
    let build = cohen_hopset(&g.unit_weighted(), tree, 0.0)?;
    let edges = build
        .hopset
        .edges
        .iter()
        .filter(|&&(u, v, _)| !g.has_edge(u, v))
        .map(|&(u, v, _)| (u, v))
        .collect();
    Ok(ShortcutSet {
        edges,
        target_hopbound: tree_hopbound(tree),
    })
}

/// Measured quality of a hopset against exact distances.
#[derive(Debug, Clone, PartialEq)]
pub struct HopsetReport {
    /// Reachable ordered pairs `(u, v)`, `u != v`.
    pub pairs: usize,
    /// Largest `d^{(β)}_{G ∪ H} / d_G` over reachable pairs with positive distance.
    pub max_stretch: f64,
    /// Pairs where the hop-bounded distance dropped below the true distance.
    pub undershoots: usize,
    /// Reachable pairs not reached within `β` hops.
    pub unreached: usize,
    /// Smallest hop budget at which every pair is within `1 + ε` (up to `n`).
    pub measured_hopbound: usize,
}

/// Compares `β`-hop distances in `G ∪ H` with Dijkstra distances in `G` for
/// every source. A relative slack of `1e-9` absorbs float rounding.
pub fn measure_hopset(g: &WeightedDiGraph, h: &HopsetSet, beta: usize) -> HopsetReport {
    let aug = h.augment(g);
    let n = g.n();
    let limit = 1.0 + h.epsilon;
    let per_source: Vec<(usize, f64, usize, usize, usize)> = (0..n)
        .into_par_iter()
        .map(|s| {
            let exact = dijkstra(g, s).expect("source in range").dist;
            let bounded = k_bounded_distances(&aug, s, beta).expect("source in range").dist;
            let (mut pairs, mut stretch, mut under, mut unreached) = (0, 1.0f64, 0, 0);
            for v in 0..n {
                if v == s || exact[v].is_infinite() {
                    continue;
                }
                pairs += 1;
                let (d, b) = (exact[v], bounded[v]);
                if b.is_infinite() {
                    unreached += 1;
                    continue;
                }
                if b < d * (1.0 - 1e-9) {
                    under += 1;
                }
                if d > 0.0 {
                    stretch = stretch.max(b / d);
                }
            }
            let hops = hops_needed(&aug, s, &exact, limit);
            (pairs, stretch, under, unreached, hops)
        })
        .collect();
    per_source.into_iter().fold(
        HopsetReport {
            pairs: 0,
            max_stretch: 1.0,
            undershoots: 0,
            unreached: 0,
            measured_hopbound: 0,
        },
        |acc, (p, st, u, un, hops)| HopsetReport {
            pairs: acc.pairs + p,
            max_stretch: acc.max_stretch.max(st),
            undershoots: acc.undershoots + u,
            unreached: acc.unreached + un,
            measured_hopbound: acc.measured_hopbound.max(hops),
        },
    )
}

fn hops_needed(aug: &WeightedDiGraph, s: VertexId, exact: &[f64], limit: f64) -> usize {
    let n = aug.n();
    let ok = |dist: &[f64]| {
        (0..n).all(|v| exact[v].is_infinite() || dist[v] <= exact[v] * limit * (1.0 + 1e-9))
    };
    let mut dist = vec![f64::INFINITY; n];
    dist[s] = 0.0;
    let mut k = 0;
    while !ok(&dist) && k < n {
        let prev = dist.clone();
        for (u, v, w) in aug.edges() {
            if prev[u] + w < dist[v] {
                dist[v] = prev[u] + w;
            }
        }
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separator::{build_decomposition_tree, SeparatorFinder, SeparatorStrategy, TreeConfig};

    fn path(n: usize) -> WeightedDiGraph {
        WeightedDiGraph::from_unweighted(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn tree_for(g: &WeightedDiGraph, tau: usize) -> DecompositionTree {
        let finder = SeparatorFinder::new(SeparatorStrategy::Exhaustive, 2.0 / 3.0).unwrap();
        let config = TreeConfig {
            leaf_threshold: tau,
            ..TreeConfig::default()
        };
        build_decomposition_tree(&g.skeleton(), &finder, &config).unwrap()
    }

    #[test]
    fn sampling_trivial_cases() {
        let g = path(6);
        assert!(sampling_d_shortcut(&g, 6, 1).unwrap().edges.is_empty());
        assert!(sampling_d_shortcut(&g, 0, 1).is_err());
        let complete = WeightedDiGraph::from_unweighted(
            4,
            (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v))),
        )
        .unwrap();
        let h = sampling_d_shortcut(&complete, 1, 3).unwrap();
        assert!(h.edges.is_empty());
        assert!(verify_hop_diameter(&complete, &h, 1));
    }

    #[test]
    fn sampling_path_reaches_two_hops() {
        let g = path(4);
        let h = sampling_d_shortcut(&g, 2, 11).unwrap();
        assert!(verify_hop_diameter(&g, &h, 2));
    }

    #[test]
    fn verify_examples() {
        let g = path(3);
        let none = ShortcutSet {
            edges: vec![],
            target_hopbound: 1,
        };
        assert!(verify_hop_diameter(&g, &none, 2));
        assert!(!verify_hop_diameter(&g, &none, 1));
        let skip = ShortcutSet {
            edges: vec![(0, 2)],
            target_hopbound: 1,
        };
        assert!(verify_hop_diameter(&g, &skip, 1));
    }

    #[test]
    fn apasp_examples() {
        let tri = WeightedDiGraph::from_unweighted(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let d = node_apasp(&tri, 0.0).unwrap();
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(0, 2), 2.0);
        assert_eq!(d.get(1, 1), 0.0);
        let approx = node_apasp(&tri, 0.1).unwrap();
        for (e, a) in d.data.iter().zip(&approx.data) {
            assert!(*e <= *a && *a <= 1.1 * e + 1e-12);
        }
        let one = node_apasp(&WeightedDiGraph::from_edges(1, []).unwrap(), 0.0).unwrap();
        assert_eq!(one.data, vec![0.0]);
    }

    #[test]
    fn round_up_stays_within_factor() {
        for &xi in &[0.01, 0.1, 0.5] {
            for i in 1..200 {
                let d = i as f64 * 0.37;
                let r = round_up(d, xi);
                assert!(r >= d && r <= d * (1.0 + xi), "{d} {xi} {r}");
            }
        }
    }

    #[test]
    fn leaf_only_tree_gives_closure() {
        let g = path(4);
        let t = tree_for(&g, 8);
        let h = cohen_shortcut(&g, &t).unwrap();
        assert_eq!(h.edges, vec![(0, 2), (0, 3), (1, 3)]);
        assert!(verify_hop_diameter(&g, &h, 1));
    }

    #[test]
    fn shortcut_edges_respect_direction() {
        // 0 -> 1 -> 2 <- 3 <- 4: nothing reaches across 2 from the right to the left
        let g = WeightedDiGraph::from_unweighted(5, [(0, 1), (1, 2), (4, 3), (3, 2)]).unwrap();
        let t = tree_for(&g, 3);
        let h = cohen_shortcut(&g, &t).unwrap();
        assert!(h.edges.contains(&(0, 2)));
        assert!(!h.edges.iter().any(|&(u, v)| (u < 2 && v > 2) || (u > 2 && v < 2)));
        assert!(verify_hop_diameter(&g, &h, tree_hopbound(&t)));
    }

    #[test]
    fn empty_separator_passes_child_estimates_through() {
        let g = WeightedDiGraph::from_edges(6, [(0, 1, 2.0), (1, 2, 3.0), (3, 4, 1.0), (4, 5, 1.0)])
            .unwrap();
        let t = tree_for(&g, 3);
        assert!(t.nodes[t.root].sep.is_empty());
        let b = cohen_hopset(&g, &t, 0.0).unwrap();
        let e: Vec<_> = b.hopset.edges.iter().map(|&(u, v, w)| ((u, v), w)).collect();
        assert!(e.contains(&((0, 2), 5.0)));
        assert!(e.contains(&((3, 5), 2.0)));
    }

    #[test]
    fn separator_route_composes() {
        // u=0 in U1, s=2 separator, v=4 in U2: 0->1->2->3->4 plus a long direct edge
        let g = WeightedDiGraph::from_edges(
            5,
            [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0), (3, 4, 4.0)],
        )
        .unwrap();
        let t = tree_for(&g, 3);
        assert_eq!(t.nodes[t.root].sep.as_slice(), &[2]);
        let b = cohen_hopset(&g, &t, 0.0).unwrap();
        let root = &b.estimates[t.root];
        assert_eq!(root.get(2, 2), Some(0.0));
        let [c1, c2] = t.nodes[t.root].children.unwrap();
        assert_eq!(b.estimates[c1].get(0, 2), Some(3.0));
        assert_eq!(b.estimates[c2].get(2, 4), Some(7.0));
        let report = measure_hopset(&g, &b.hopset, tree_hopbound(&t));
        assert_eq!(report.max_stretch, 1.0);
        assert_eq!(report.unreached, 0);
    }

    #[test]
    fn unit_path_distance_preserved() {
        let g = path(8);
        let t = tree_for(&g, 2);
        for eps in [0.0, 0.5] {
            let b = cohen_hopset(&g, &t, eps).unwrap();
            let beta = tree_hopbound(&t);
            let aug = b.hopset.augment(&g);
            let d = k_bounded_distances(&aug, 0, beta).unwrap().dist[7];
            assert!(d >= 7.0 && d <= 7.0 * (1.0 + eps) + 1e-9, "{eps}: {d}");
        }
    }

    #[test]
    fn unreachable_pair_gets_no_edge() {
        let g = path(6);
        let t = tree_for(&g, 2);
        let b = cohen_hopset(&g, &t, 0.1).unwrap();
        assert!(b.hopset.edges.iter().all(|&(u, v, _)| u < v));
    }

    #[test]
    fn node_xi_composes_within_epsilon() {
        for &eps in &[0.01, 0.1, 0.5, 1.0, 2.0, 10.0] {
            for depth in 0..20 {
                let xi = node_xi(eps, depth);
                let total = (1.0 + xi).powi(3 * (depth as i32 + 1));
                assert!(total <= 1.0 + eps + 1e-12, "{eps} {depth}");
            }
        }
    }

    #[test]
    fn text_export() {
        let s = ShortcutSet {
            edges: vec![(0, 2), (1, 3)],
            target_hopbound: 2,
        };
        assert_eq!(s.to_text(), "0 2\n1 3\n");
        let h = HopsetSet {
            edges: vec![(0, 2, 2.5)],
            epsilon: 0.1,
            hopbound: 4,
        };
        assert_eq!(h.to_text(), "0 2 2.5\n");
    }
}
