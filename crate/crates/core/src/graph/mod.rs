//! Implicit graphs: the [`LazyGraph`] contract, the concrete families used
//! throughout the crate, bounded breadth-first metric operations and a small
//! exact isomorphism search for materialized finite graphs.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::group::GroupError;
use crate::vertex::VertexId;

mod explicit;
mod families;
mod search;
mod spec;

pub use explicit::{isomorphism, materialize, ExplicitGraph, ISOMORPHISM_VERTEX_LIMIT};
pub use families::{Cycle, InfinitePath, PathGraph};
pub use search::{ball, distance, fast_distance, find_geodesic, step_toward, Path};
pub use spec::GraphSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid vertex {0}")]
    InvalidVertex(VertexId),
    #[error("no vertex at distance {length} from {base}")]
    NotFound { base: VertexId, length: u64 },
    #[error("graph has {count} vertices, limit is {limit}")]
    TooLarge { count: usize, limit: usize },
    #[error("invalid graph description: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Which construction a lazy graph comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path(u64),
    Cycle(u64),
    InfinitePath,
    Cayley,
    Wreath,
    BoardGraph,
    ExplicitFinite,
}

/// A simple, locally finite graph given by a base vertex and a neighbor
/// function. Never materialized as a whole.
///
/// Implementations must be symmetric and loop-free, and return neighbor lists
/// that are duplicate-free and sorted by [`VertexId`] order.
pub trait LazyGraph: Send + Sync + fmt::Debug {
    fn base(&self) -> VertexId;

    fn contains(&self, v: &VertexId) -> bool;

    /// Errors with [`GraphError::InvalidVertex`] when `v` is not a vertex.
    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError>;

    fn family(&self) -> Family;

    /// Exact distance for families with a closed form.
    fn closed_form_distance(&self, _u: &VertexId, _v: &VertexId) -> Option<u64> {
        None
    }

    /// Integer coordinate for graphs that are (finite or infinite) paths laid
    /// out on the integer line, where distance is the coordinate difference.
    fn line_coordinate(&self, _v: &VertexId) -> Option<i64> {
        None
    }

    fn check(&self, v: &VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex(v.clone()))
        }
    }
}

pub type GraphRef = Arc<dyn LazyGraph>;

/// A graph together with a way to evaluate its path metric. Engines use this
/// so that graphs with a faster exact distance than breadth-first search can
/// supply it.
pub trait Metric: Send + Sync + fmt::Debug {
    fn graph(&self) -> &dyn LazyGraph;

    /// Distance between `u` and `v` if it is at most `cutoff`.
    fn distance(&self, u: &VertexId, v: &VertexId, cutoff: u64) -> Result<Option<u64>, GraphError>;
}

pub type MetricRef = Arc<dyn Metric>;

/// Plain bidirectional breadth-first search (closed forms where available).
#[derive(Debug, Clone)]
pub struct BfsMetric(pub GraphRef);

impl Metric for BfsMetric {
    fn graph(&self) -> &dyn LazyGraph {
        self.0.as_ref()
    }

    fn distance(&self, u: &VertexId, v: &VertexId, cutoff: u64) -> Result<Option<u64>, GraphError> {
        fast_distance(self.0.as_ref(), u, v, cutoff)
    }
}
