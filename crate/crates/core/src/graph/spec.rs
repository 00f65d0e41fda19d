use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Cycle, ExplicitGraph, GraphError, GraphRef, InfinitePath, PathGraph};
use crate::group::{CayleyGraph, Element, Group};
use crate::vertex::VertexId;
use crate::wreath::WreathProduct;

/// Structured description of a graph family, as used in configuration files.
///
/// ```json
/// {"family":"cycle","k":5}
/// {"family":"infinite_path"}
/// {"family":"cayley","group":{"group":"Z"},"generators":[1]}
/// {"family":"wreath","omega":{"family":"path","k":2},"lambda":{"family":"infinite_path"},"base_state":0}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Path { k: u64 },
    Cycle { k: u64 },
    InfinitePath,
    Cayley { group: Group, generators: Vec<Element> },
    Wreath { omega: Box<GraphSpec>, lambda: Box<GraphSpec>, base_state: VertexId },
    Explicit { vertices: Vec<VertexId>, edges: Vec<(VertexId, VertexId)> },
}

impl GraphSpec {
    pub fn build(&self) -> Result<GraphRef, GraphError> {
        Ok(match self {
            GraphSpec::Path { k } => Arc::new(PathGraph::new(*k)?),
            GraphSpec::Cycle { k } => Arc::new(Cycle::new(*k)?),
            GraphSpec::InfinitePath => Arc::new(InfinitePath),
            GraphSpec::Cayley { group, generators } => {
                Arc::new(CayleyGraph::new(group.clone(), generators.clone())?)
            }
            GraphSpec::Wreath { omega, lambda, base_state } => Arc::new(WreathProduct::new(
                omega.build()?,
                base_state.clone(),
                lambda.build()?,
            )?),
            GraphSpec::Explicit { vertices, edges } => {
                Arc::new(ExplicitGraph::from_edges(vertices.clone(), edges.clone())?)
            }
        })
    }

    /// Short human-readable name, e.g. `P2`, `C5`, `Pinf`.
    pub fn short_name(&self) -> String {
        match self {
            GraphSpec::Path { k } => format!("P{k}"),
            GraphSpec::Cycle { k } => format!("C{k}"),
            GraphSpec::InfinitePath => "Pinf".into(),
            GraphSpec::Cayley { group, .. } => format!("Cay({group})"),
            GraphSpec::Wreath { omega, lambda, .. } => {
                format!("{}wr{}", omega.short_name(), lambda.short_name())
            }
            GraphSpec::Explicit { vertices, .. } => format!("G{}", vertices.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    #[test]
    fn parses_documented_forms() {
        let c: GraphSpec = serde_json::from_str(r#"{"family":"cycle","k":5}"#).unwrap();
        assert_eq!(c.build().unwrap().family(), Family::Cycle(5));
        let p: GraphSpec = serde_json::from_str(r#"{"family":"infinite_path"}"#).unwrap();
        assert_eq!(p.build().unwrap().family(), Family::InfinitePath);
        let w: GraphSpec = serde_json::from_str(
            r#"{"family":"wreath","omega":{"family":"path","k":2},"lambda":{"family":"infinite_path"},"base_state":0}"#,
        )
        .unwrap();
        assert_eq!(w.build().unwrap().family(), Family::Wreath);
        let cay: GraphSpec =
            serde_json::from_str(r#"{"family":"cayley","group":{"group":"Z"},"generators":[1]}"#).unwrap();
        assert_eq!(cay.build().unwrap().neighbors(&VertexId::Int(0)).unwrap().len(), 2);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(GraphSpec::Cycle { k: 1 }.build().is_err());
        let bad = GraphSpec::Wreath {
            omega: Box::new(GraphSpec::Path { k: 2 }),
            lambda: Box::new(GraphSpec::InfinitePath),
            base_state: VertexId::Int(7),
        };
        assert!(bad.build().is_err());
        assert!(serde_json::from_str::<GraphSpec>(r#"{"family":"cycle","k":5,"x":1}"#).is_err());
    }
}
