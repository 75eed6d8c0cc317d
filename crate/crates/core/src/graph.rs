//! Directed weighted graphs in CSR form, vertex subsets, induced subgraphs,
//! undirected skeletons and integer weight conditioning.

use std::collections::BTreeMap;

use thiserror::Error;

/// Dense vertex identifier in `[0, n)`.
pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("edge ({from}, {to}) has invalid weight {weight}")]
    InvalidWeight {
        from: VertexId,
        to: VertexId,
        weight: f64,
    },
    #[error("scaling parameter must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("edge ({from}, {to}) has non-integral weight {weight}")]
    NonIntegralWeight {
        from: VertexId,
        to: VertexId,
        weight: f64,
    },
}

/// Sorted set of distinct vertices drawn from a graph with `origin_n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSubset {
    members: Vec<VertexId>,
    origin_n: usize,
}

impl VertexSubset {
    pub fn new(
        members: impl IntoIterator<Item = VertexId>,
        origin_n: usize,
    ) -> Result<Self, GraphError> {
        let mut members: Vec<VertexId> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v >= origin_n) {
            return Err(GraphError::VertexOutOfRange {
                vertex: bad,
                n: origin_n,
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { members, origin_n })
    }

    pub fn full(n: usize) -> Self {
        Self {
            members: (0..n).collect(),
            origin_n: n,
        }
    }

    pub fn empty(origin_n: usize) -> Self {
        Self {
            members: Vec::new(),
            origin_n,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn origin_n(&self) -> usize {
        self.origin_n
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Position of `v` inside the sorted member list.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.members
    }
}

/// Immutable directed graph with non-negative edge weights.
///
/// Parallel edges collapse to their minimum weight. Out- and in-adjacency are
/// stored in CSR form with targets (sources) sorted per row.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDiGraph {
    n: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<VertexId>,
    out_weights: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<VertexId>,
    in_weights: Vec<f64>,
    aspect_ratio: f64,
}

impl WeightedDiGraph {
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, f64)>,
    ) -> Result<Self, GraphError> {
        let mut collapsed: BTreeMap<(VertexId, VertexId), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(GraphError::InvalidWeight {
                    from: u,
                    to: v,
                    weight: w,
                });
            }
            collapsed
                .entry((u, v))
                .and_modify(|cur| *cur = cur.min(w))
                .or_insert(w);
        }
        Ok(Self::from_sorted_unique(n, collapsed))
    }

    /// Unweighted convenience constructor; every edge gets weight 1.
    pub fn from_unweighted(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    fn from_sorted_unique(n: usize, edges: BTreeMap<(VertexId, VertexId), f64>) -> Self {
        let m = edges.len();
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(u, v) in edges.keys() {
            out_offsets[u + 1] += 1;
            in_offsets[v + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut out_targets = Vec::with_capacity(m);
        let mut out_weights = Vec::with_capacity(m);
        let mut in_sources = vec![0; m];
        let mut in_weights = vec![0.0; m];
        let mut in_fill = in_offsets.clone();
        // BTreeMap order is (u, v) ascending, so in-lists come out sorted by source.
        for (&(u, v), &w) in &edges {
            out_targets.push(v);
            out_weights.push(w);
            in_sources[in_fill[v]] = u;
            in_weights[in_fill[v]] = w;
            in_fill[v] += 1;
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for &w in &out_weights {
            if w > 0.0 {
                lo = lo.min(w);
                hi = hi.max(w);
            }
        }
        let aspect_ratio = if lo.is_finite() { hi / lo } else { 1.0 };
        Self {
            n,
            out_offsets,
            out_targets,
            out_weights,
            in_offsets,
            in_sources,
            in_weights,
            aspect_ratio,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.out_targets.len()
    }

    /// Max nonzero weight over min nonzero weight; 1 when no nonzero weight exists.
    pub fn aspect_ratio(&self) -> f64 {
        self.aspect_ratio
    }

    pub fn min_nonzero_weight(&self) -> Option<f64> {
        self.out_weights
            .iter()
            .copied()
            .filter(|&w| w > 0.0)
            .min_by(f64::total_cmp)
    }

    pub fn out_edges(&self, u: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        let range = self.out_offsets[u]..self.out_offsets[u + 1];
        self.out_targets[range.clone()]
            .iter()
            .copied()
            .zip(self.out_weights[range].iter().copied())
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        let range = self.in_offsets[v]..self.in_offsets[v + 1];
        self.in_sources[range.clone()]
            .iter()
            .copied()
            .zip(self.in_weights[range].iter().copied())
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        self.out_offsets[u + 1] - self.out_offsets[u]
    }

    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let range = self.out_offsets[u]..self.out_offsets[u + 1];
        self.out_targets[range.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| self.out_weights[range.start + i])
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_weight(u, v).is_some()
    }

    /// All edges in `(u, v)` lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        (0..self.n).flat_map(move |u| self.out_edges(u).map(move |(v, w)| (u, v, w)))
    }

    pub fn is_integral(&self) -> bool {
        self.out_weights.iter().all(|w| w.fract() == 0.0)
    }

    /// Same vertex set with extra edges merged in (parallel edges keep the minimum).
    pub fn with_extra_edges(
        &self,
        extra: impl IntoIterator<Item = (VertexId, VertexId, f64)>,
    ) -> Result<Self, GraphError> {
        Self::from_edges(self.n, self.edges().chain(extra))
    }

    /// Copy of the graph with every weight replaced by 1.
    pub fn unit_weighted(&self) -> Self {
        let edges = self.edges().map(|(u, v, _)| ((u, v), 1.0)).collect();
        Self::from_sorted_unique(self.n, edges)
    }

    /// Subgraph induced by `subset`, relabelled to `0..subset.len()` in sorted order.
    pub fn induced_subgraph(
        &self,
        subset: &VertexSubset,
    ) -> Result<(WeightedDiGraph, IndexMap), GraphError> {
        if let Some(&bad) = subset.as_slice().iter().find(|&&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange {
                vertex: bad,
                n: self.n,
            });
        }
        let map = IndexMap::new(subset.as_slice().to_vec(), self.n);
        let mut edges = BTreeMap::new();
        for (lu, &u) in map.to_global.iter().enumerate() {
            for (v, w) in self.out_edges(u) {
                if let Some(lv) = map.local(v) {
                    edges.insert((lu, lv), w);
                }
            }
        }
        Ok((Self::from_sorted_unique(subset.len(), edges), map))
    }

    /// Undirected, unweighted skeleton; self-loops are dropped.
    pub fn skeleton(&self) -> Skeleton {
        let mut adj = vec![Vec::new(); self.n];
        for (u, v, _) in self.edges() {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Skeleton { adj }
    }
}

/// Bidirectional old/new index map produced by [`WeightedDiGraph::induced_subgraph`].
#[derive(Debug, Clone, PartialEq)]
pub struct IndexMap {
    to_global: Vec<VertexId>,
    to_local: Vec<Option<usize>>,
}

impl IndexMap {
    fn new(to_global: Vec<VertexId>, origin_n: usize) -> Self {
        let mut to_local = vec![None; origin_n];
        for (i, &g) in to_global.iter().enumerate() {
            to_local[g] = Some(i);
        }
        Self {
            to_global,
            to_local,
        }
    }

    pub fn global(&self, local: usize) -> VertexId {
        self.to_global[local]
    }

    pub fn local(&self, global: VertexId) -> Option<usize> {
        self.to_local.get(global).copied().flatten()
    }

    pub fn globals(&self) -> &[VertexId] {
        &self.to_global
    }
}

/// Undirected unweighted graph with sorted neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    adj: Vec<Vec<VertexId>>,
}

impl Skeleton {
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `{u, v}` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }
}

/// Integer-weighted copy of a graph together with the factor that maps
/// integer distances back to original units.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerWeights {
    /// Same topology; every weight is a non-negative integer stored as `f64`.
    pub graph: WeightedDiGraph,
    /// Multiply an integer distance by this to get original units.
    pub unit: f64,
    /// Largest integer weight.
    pub max_weight: u64,
}

/// Normalises the minimum nonzero weight to 1, divides by `xi` and rounds up.
///
/// Zero weights stay zero. Rescaled distances overestimate true distances by
/// at most a factor `1 + xi`.
pub fn integerize_weights(g: &WeightedDiGraph, xi: f64) -> Result<IntegerWeights, GraphError> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(GraphError::InvalidScale(xi));
    }
    let base = g.min_nonzero_weight().unwrap_or(1.0);
    let mut max_weight = 0u64;
    let edges: BTreeMap<_, _> = g
        .edges()
        .map(|(u, v, w)| {
            let scaled = if w == 0.0 { 0.0 } else { (w / base / xi).ceil() };
            max_weight = max_weight.max(scaled as u64);
            ((u, v), scaled)
        })
        .collect();
    Ok(IntegerWeights {
        graph: WeightedDiGraph::from_sorted_unique(g.n, edges),
        unit: base * xi,
        max_weight,
    })
}

/// Wraps an already integral graph without rescaling.
pub fn integral_weights(g: &WeightedDiGraph) -> Result<IntegerWeights, GraphError> {
    if let Some((u, v, w)) = g.edges().find(|(_, _, w)| w.fract() != 0.0) {
        return Err(GraphError::NonIntegralWeight {
            from: u,
            to: v,
            weight: w,
        });
    }
    let max_weight = g.edges().map(|(_, _, w)| w as u64).max().unwrap_or(0);
    Ok(IntegerWeights {
        graph: g.clone(),
        unit: 1.0,
        max_weight,
    })
}
