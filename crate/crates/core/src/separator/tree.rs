use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{balance_to_half, make_doubly_incident, SeparatorError, SeparatorFinder};
use crate::graph::{Skeleton, VertexId, VertexSubset};

pub const DEFAULT_LEAF_THRESHOLD: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("leaf threshold must be at least 1")]
    ZeroThreshold,
    #[error("child size fraction must lie in (0, 1], got {0}")]
    InvalidFraction(f64),
    #[error(transparent)]
    Separator(#[from] SeparatorError),
    #[error("tree is for {tree_n} vertices but the graph has {graph_n}")]
    SizeMismatch { tree_n: usize, graph_n: usize },
    #[error("node {node}: {reason}")]
    Invalid { node: usize, reason: String },
    #[error("tree document: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeConfig {
    pub leaf_threshold: usize,
    /// A node is split only if each child keeps at most this fraction of it.
    pub max_child_fraction: f64,
    /// Run the half-balancing loop on top of the finder at every node.
    pub rebalance: bool,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            leaf_threshold: DEFAULT_LEAF_THRESHOLD,
            max_child_fraction: 0.8,
            rebalance: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub vset: VertexSubset,
    /// Empty at leaves.
    pub sep: VertexSubset,
    pub boundary: VertexSubset,
    /// Height of the subtree rooted here; 0 at leaves.
    pub level: usize,
    pub children: Option<[usize; 2]>,
    /// Achieved `max(|U1|, |U2|) / |V(t)|` for internal nodes built here.
    pub ratio: Option<f64>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTree {
    pub n: usize,
    pub nodes: Vec<TreeNode>,
    pub root: usize,
    pub leaf_threshold: usize,
}

fn subset(v: impl IntoIterator<Item = VertexId>, n: usize) -> VertexSubset {
    VertexSubset::new(v, n).expect("vertex in range")
}

fn difference(a: &VertexSubset, b: &VertexSubset) -> Vec<VertexId> {
    a.iter().filter(|&v| !b.contains(v)).collect()
}

/// Recursively splits the skeleton with `finder`, making every separator
/// doubly incident before recursing. A node becomes a leaf when it has at
/// most `leaf_threshold` vertices or when no split shrinks both children
/// enough.
pub fn build_decomposition_tree(
    skel: &Skeleton,
    finder: &SeparatorFinder,
    config: &TreeConfig,
) -> Result<DecompositionTree, TreeError> {
    if config.leaf_threshold == 0 {
        return Err(TreeError::ZeroThreshold);
    }
    if !(config.max_child_fraction > 0.0 && config.max_child_fraction <= 1.0) {
        return Err(TreeError::InvalidFraction(config.max_child_fraction));
    }
    let n = skel.n();
    let mut nodes = vec![TreeNode {
        vset: VertexSubset::full(n),
        sep: VertexSubset::empty(n),
        boundary: VertexSubset::empty(n),
        level: 0,
        children: None,
        ratio: None,
    }];
    let mut stack = vec![0usize];
    while let Some(t) = stack.pop() {
        let size = nodes[t].vset.len();
        if size <= config.leaf_threshold {
            continue;
        }
        let verts = nodes[t].vset.as_slice().to_vec();
        let split = if config.rebalance {
            balance_to_half(skel, &verts, finder)?.separator
        } else {
            finder.find(skel, &verts)?
        };
        let split = make_doubly_incident(skel, &split);
        let child_cap = (config.max_child_fraction * size as f64 + 1e-9).floor() as usize;
        let child_sizes = [split.part_a.len(), split.part_b.len()].map(|p| p + split.sep.len());
        if split.part_a.is_empty()
            || split.part_b.is_empty()
            || child_sizes.iter().any(|&c| c > child_cap || c >= size)
        {
            continue;
        }
        let ratio = split.part_a.len().max(split.part_b.len()) as f64 / size as f64;
        let mut ids = [0usize; 2];
        for (i, part) in [&split.part_a, &split.part_b].into_iter().enumerate() {
            let vset = subset(part.iter().chain(split.sep.iter()), n);
            let inherited = nodes[t].boundary.iter().filter(|&v| vset.contains(v));
            let boundary = subset(split.sep.iter().chain(inherited), n);
            ids[i] = nodes.len();
            nodes.push(TreeNode {
                vset,
                sep: VertexSubset::empty(n),
                boundary,
                level: 0,
                children: None,
                ratio: None,
            });
        }
        nodes[t].sep = split.sep;
        nodes[t].children = Some(ids);
        nodes[t].ratio = Some(ratio);
        stack.extend(ids.iter().rev());
    }
    let mut tree = DecompositionTree {
        n,
        nodes,
        root: 0,
        leaf_threshold: config.leaf_threshold,
    };
    tree.recompute_levels();
    Ok(tree)
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    vset: Vec<VertexId>,
    sep: Vec<VertexId>,
    boundary: Vec<VertexId>,
    #[serde(default)]
    level: Option<usize>,
    children: Option<[usize; 2]>,
    #[serde(default)]
    ratio: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TreeDoc {
    schema: u32,
    n: usize,
    root: usize,
    leaf_threshold: usize,
    nodes: Vec<NodeDoc>,
}

impl DecompositionTree {
    /// Height of the tree: the root's level.
    pub fn depth(&self) -> usize {
        self.nodes[self.root].level
    }

    /// The two parts `U1, U2` of an internal node: each child's vertex set minus `S(t)`.
    pub fn parts(&self, t: usize) -> Option<[Vec<VertexId>; 2]> {
        let [c1, c2] = self.nodes[t].children?;
        let sep = &self.nodes[t].sep;
        Some([
            difference(&self.nodes[c1].vset, sep),
            difference(&self.nodes[c2].vset, sep),
        ])
    }

    /// Node ids with every child listed before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            match self.nodes[t].children {
                Some([a, b]) if !expanded => {
                    stack.push((t, true));
                    stack.push((b, false));
                    stack.push((a, false));
                }
                _ => out.push(t),
            }
        }
        out
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|t| t.is_leaf()).count()
    }

    /// Leaves above the leaf threshold, left when no split made progress.
    pub fn oversized_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|t| t.is_leaf() && t.vset.len() > self.leaf_threshold)
            .count()
    }

    fn recompute_levels(&mut self) {
        for t in self.post_order() {
            self.nodes[t].level = match self.nodes[t].children {
                Some([a, b]) => 1 + self.nodes[a].level.max(self.nodes[b].level),
                None => 0,
            };
        }
    }

    /// Checks every structural invariant against `skel`: the root covers all
    /// vertices with an empty boundary, each internal node splits into
    /// `U1 + S`, `U2 + S` with no skeleton edge between `U1` and `U2`, the
    /// boundary recurrence holds, and levels are subtree heights.
    pub fn validate(&self, skel: &Skeleton) -> Result<(), TreeError> {
        if self.n != skel.n() {
            return Err(TreeError::SizeMismatch {
                tree_n: self.n,
                graph_n: skel.n(),
            });
        }
        let bad = |node: usize, reason: &str| TreeError::Invalid {
            node,
            reason: reason.to_string(),
        };
        let root = self.nodes.get(self.root).ok_or_else(|| bad(self.root, "root id out of range"))?;
        if root.vset.len() != self.n || !root.boundary.is_empty() {
            return Err(bad(self.root, "root must hold every vertex and have no boundary"));
        }
        let mut visits = vec![0usize; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(t) = stack.pop() {
            visits[t] += 1;
            if visits[t] > 1 {
                return Err(bad(t, "node reached twice"));
            }
            let node = &self.nodes[t];
            if node.vset.origin_n() != self.n {
                return Err(bad(t, "vertex set drawn from a different graph"));
            }
            let Some([c1, c2]) = node.children else {
                if !node.sep.is_empty() {
                    return Err(bad(t, "leaf with a separator"));
                }
                if node.level != 0 {
                    return Err(bad(t, "leaf level must be 0"));
                }
                continue;
            };
            if c1 >= self.nodes.len() || c2 >= self.nodes.len() || c1 == c2 {
                return Err(bad(t, "child id out of range"));
            }
            if !node.sep.iter().all(|v| node.vset.contains(v)) {
                return Err(bad(t, "separator outside the node"));
            }
            let [u1, u2] = self.parts(t).expect("internal node");
            for (c, u) in [(c1, &u1), (c2, &u2)] {
                if !node.sep.iter().all(|v| self.nodes[c].vset.contains(v)) {
                    return Err(bad(c, "child does not contain the parent separator"));
                }
                if !u.iter().all(|&v| node.vset.contains(v)) {
                    return Err(bad(c, "child holds vertices outside its parent"));
                }
                let expected = subset(
                    node.sep
                        .iter()
                        .chain(node.boundary.iter().filter(|&v| self.nodes[c].vset.contains(v))),
                    self.n,
                );
                if self.nodes[c].boundary != expected {
                    return Err(bad(c, "boundary recurrence violated"));
                }
            }
            if u1.len() + u2.len() + node.sep.len() != node.vset.len()
                || u1.iter().any(|v| u2.binary_search(v).is_ok())
            {
                return Err(bad(t, "children do not partition the node"));
            }
            let u2_set = subset(u2.iter().copied(), self.n);
            if u1.iter().any(|&u| skel.neighbors(u).iter().any(|&v| u2_set.contains(v))) {
                return Err(bad(t, "skeleton edge crosses the separator"));
            }
            let expected_level = 1 + self.nodes[c1].level.max(self.nodes[c2].level);
            if node.level != expected_level {
                return Err(bad(t, "level is not the subtree height"));
            }
            stack.push(c1);
            stack.push(c2);
        }
        if let Some(t) = visits.iter().position(|&v| v == 0) {
            return Err(bad(t, "node unreachable from the root"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc = TreeDoc {
            schema: 1,
            n: self.n,
            root: self.root,
            leaf_threshold: self.leaf_threshold,
            nodes: self
                .nodes
                .iter()
                .map(|t| NodeDoc {
                    vset: t.vset.as_slice().to_vec(),
                    sep: t.sep.as_slice().to_vec(),
                    boundary: t.boundary.as_slice().to_vec(),
                    level: Some(t.level),
                    children: t.children,
                    ratio: t.ratio,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("tree serializes")
    }

    /// Parses a tree document. Missing levels are recomputed; call
    /// [`DecompositionTree::validate`] before use.
    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        let doc: TreeDoc = serde_json::from_str(text).map_err(|e| TreeError::Json(e.to_string()))?;
        if doc.schema != 1 {
            return Err(TreeError::Json(format!("unsupported schema {}", doc.schema)));
        }
        if doc.root >= doc.nodes.len() {
            return Err(TreeError::Json("root id out of range".into()));
        }
        let n = doc.n;
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        let mut levels_given = true;
        for (i, d) in doc.nodes.into_iter().enumerate() {
            let set = |v: Vec<VertexId>| {
                VertexSubset::new(v, n).map_err(|e| TreeError::Invalid {
                    node: i,
                    reason: e.to_string(),
                })
            };
            levels_given &= d.level.is_some();
            nodes.push(TreeNode {
                vset: set(d.vset)?,
                sep: set(d.sep)?,
                boundary: set(d.boundary)?,
                level: d.level.unwrap_or(0),
                children: d.children,
                ratio: d.ratio,
            });
        }
        let count = nodes.len();
        for (i, t) in nodes.iter().enumerate() {
            if let Some([a, b]) = t.children {
                if a >= count || b >= count {
                    return Err(TreeError::Invalid {
                        node: i,
                        reason: "child id out of range".into(),
                    });
                }
            }
        }
        let mut tree = Self {
            n,
            nodes,
            root: doc.root,
            leaf_threshold: doc.leaf_threshold,
        };
        if !levels_given {
            tree.recompute_levels();
        }
        Ok(tree)
    }
}

#[cfg(test)]
mod tests {
    use super::super::SeparatorStrategy;
    use super::*;

    fn path(n: usize) -> Skeleton {
        Skeleton::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn exhaustive() -> SeparatorFinder {
        SeparatorFinder::new(SeparatorStrategy::Exhaustive, 2.0 / 3.0).unwrap()
    }

    fn with_threshold(leaf_threshold: usize) -> TreeConfig {
        TreeConfig {
            leaf_threshold,
            ..TreeConfig::default()
        }
    }

    #[test]
    fn small_graph_is_single_leaf() {
        let t = build_decomposition_tree(&path(2), &exhaustive(), &with_threshold(4)).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert!(t.nodes[0].boundary.is_empty() && t.nodes[0].sep.is_empty());
        assert_eq!(t.depth(), 0);
    }

    #[test]
    fn path5_splits_at_middle() {
        let skel = path(5);
        let t = build_decomposition_tree(&skel, &exhaustive(), &with_threshold(2)).unwrap();
        t.validate(&skel).unwrap();
        let root = &t.nodes[t.root];
        assert_eq!(root.sep.as_slice(), &[2]);
        let [c1, c2] = root.children.unwrap();
        assert_eq!(t.nodes[c1].vset.as_slice(), &[0, 1, 2]);
        assert_eq!(t.nodes[c2].vset.as_slice(), &[2, 3, 4]);
        assert_eq!(t.nodes[c1].boundary.as_slice(), &[2]);
        assert_eq!(t.nodes[c2].boundary.as_slice(), &[2]);
    }

    #[test]
    fn boundary_lies_in_ancestor_separators() {
        let skel = path(20);
        let t = build_decomposition_tree(&skel, &exhaustive(), &with_threshold(2)).unwrap();
        t.validate(&skel).unwrap();
        let mut parent = vec![None; t.nodes.len()];
        for (i, node) in t.nodes.iter().enumerate() {
            if let Some([a, b]) = node.children {
                parent[a] = Some(i);
                parent[b] = Some(i);
            }
        }
        for (i, node) in t.nodes.iter().enumerate() {
            let mut seps = Vec::new();
            let mut p = parent[i];
            while let Some(q) = p {
                seps.extend(t.nodes[q].sep.iter());
                p = parent[q];
            }
            assert!(node.boundary.iter().all(|v| seps.contains(&v)));
        }
    }

    #[test]
    fn zero_threshold_rejected() {
        let err = build_decomposition_tree(&path(3), &exhaustive(), &with_threshold(0));
        assert_eq!(err, Err(TreeError::ZeroThreshold));
    }

    #[test]
    fn json_round_trip() {
        let skel = path(12);
        let t = build_decomposition_tree(&skel, &exhaustive(), &with_threshold(3)).unwrap();
        let back = DecompositionTree::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        back.validate(&skel).unwrap();
    }

    #[test]
    fn validate_catches_broken_boundary() {
        let skel = path(5);
        let mut t = build_decomposition_tree(&skel, &exhaustive(), &with_threshold(2)).unwrap();
        let [c1, _] = t.nodes[0].children.unwrap();
        t.nodes[c1].boundary = VertexSubset::empty(5);
        assert!(matches!(t.validate(&skel), Err(TreeError::Invalid { .. })));
    }

    #[test]
    fn validate_catches_crossing_edge() {
        // claim {0,1} | {2,3,4} split with an empty separator on a path
        let skel = path(5);
        let mut t = build_decomposition_tree(&skel, &exhaustive(), &with_threshold(2)).unwrap();
        let [c1, c2] = t.nodes[0].children.unwrap();
        t.nodes[0].sep = VertexSubset::empty(5);
        t.nodes[c1].vset = VertexSubset::new([0, 1], 5).unwrap();
        t.nodes[c2].vset = VertexSubset::new([2, 3, 4], 5).unwrap();
        assert!(t.validate(&skel).is_err());
    }

    #[test]
    fn post_order_lists_children_first() {
        let t = build_decomposition_tree(&path(16), &exhaustive(), &with_threshold(2)).unwrap();
        let order = t.post_order();
        assert_eq!(order.len(), t.nodes.len());
        let pos: Vec<usize> = {
            let mut p = vec![0; order.len()];
            for (i, &t) in order.iter().enumerate() {
                p[t] = i;
            }
            p
        };
        for (i, node) in t.nodes.iter().enumerate() {
            if let Some([a, b]) = node.children {
                assert!(pos[a] < pos[i] && pos[b] < pos[i]);
            }
        }
    }
}
