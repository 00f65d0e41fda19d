use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lamp::Board;
use crate::support::FinSupportedMap;

/// Canonical identifier of a vertex in a (possibly infinite) graph.
///
/// Integers label the vertices of paths, cycles, the infinite path and the
/// Cayley graphs of `Z` and `Z_m`. Wreath-product vertices (and therefore
/// Cayley graphs of group wreath products) use [`WreathVertex`]; vertices of a
/// graph of boards use [`Board`].
///
/// The derived order compares integers numerically and places composite
/// vertices after all integers; it is used for every deterministic tie-break.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexId {
    Int(i64),
    Wreath(Box<WreathVertex>),
    Board(Box<Board>),
}

/// Vertex `(f, v)` of a restricted wreath product `Omega wr Lambda`: a lamp
/// configuration `f` (finitely supported, base state omitted) and a position.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WreathVertex {
    pub f: FinSupportedMap<VertexId, VertexId>,
    pub v: VertexId,
}

impl VertexId {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            VertexId::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_wreath(&self) -> Option<&WreathVertex> {
        match self {
            VertexId::Wreath(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_board(&self) -> Option<&Board> {
        match self {
            VertexId::Board(b) => Some(b),
            _ => None,
        }
    }

    pub fn wreath(f: FinSupportedMap<VertexId, VertexId>, v: VertexId) -> Self {
        VertexId::Wreath(Box::new(WreathVertex { f, v }))
    }

    /// Stable text form (compact JSON).
    pub fn to_text(&self) -> String {
        serde_json::to_string(self).expect("vertex ids always serialize")
    }

    pub fn from_text(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

impl From<i64> for VertexId {
    fn from(i: i64) -> Self {
        VertexId::Int(i)
    }
}

impl From<WreathVertex> for VertexId {
    fn from(w: WreathVertex) -> Self {
        VertexId::Wreath(Box::new(w))
    }
}

impl From<Board> for VertexId {
    fn from(b: Board) -> Self {
        VertexId::Board(Box::new(b))
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Int(i) => write!(f, "{i}"),
            VertexId::Wreath(w) => write!(f, "({:?}, {:?})", w.f, w.v),
            VertexId::Board(b) => write!(f, "{b:?}"),
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for WreathVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.f, self.v)
    }
}
