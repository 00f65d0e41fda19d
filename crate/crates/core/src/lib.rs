//! Lamplighter game and weak cops-and-robbers engines on wreath products of
//! graphs.
//!
//! Graphs are lazy and possibly infinite ([`graph::LazyGraph`]); vertices are
//! canonical [`vertex::VertexId`] values shared by integer graphs, wreath
//! products, boards and group elements.

pub mod graph;
pub mod group;
pub mod lamp;
pub mod strategy;
pub mod support;
pub mod trace;
pub mod vertex;
pub mod wcr;
pub mod wreath;
