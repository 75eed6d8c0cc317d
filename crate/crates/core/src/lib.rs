//! Multi-source reachability and approximate shortest-path distances in
//! directed graphs.
//!
//! A query first adds a diameter-reducing edge set to the graph: a sampled
//! shortcut for arbitrary digraphs, or a shortcut or hopset built over a
//! separator decomposition tree. It then repeatedly multiplies the source
//! rows of the augmented adjacency matrix by the full matrix, over the
//! Boolean semiring for reachability or the min-plus semiring for distances.

pub mod generators;
pub mod graph;
pub mod hopset;
pub mod omega;
pub mod oracles;
pub mod pipeline;
pub mod semiring;
pub mod separator;

pub use graph::{VertexId, VertexSubset, WeightedDiGraph};
