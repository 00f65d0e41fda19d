use super::{Element, Group, GroupError};
use crate::graph::{Family, GraphError, LazyGraph};
use crate::vertex::VertexId;

/// `Cay(G, S)`: vertices are group elements, `g ~ g s` for every `s` in `S`.
/// Edges are undirected, so neighbors are `g s` and `g s^-1`.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    group: Group,
    generators: Vec<Element>,
    steps: Vec<Element>,
}

impl CayleyGraph {
    /// `generators` must belong to `group` and exclude the identity.
    pub fn new(group: Group, generators: Vec<Element>) -> Result<Self, GraphError> {
        group.validate()?;
        if generators.is_empty() {
            return Err(GraphError::InvalidSpec("Cayley graph needs generators".into()));
        }
        let identity = group.identity();
        let mut steps = Vec::new();
        for s in &generators {
            if *s == identity {
                return Err(GraphError::InvalidSpec("generating set contains the identity".into()));
            }
            steps.push(s.clone());
            steps.push(group.inverse(s)?);
        }
        steps.sort();
        steps.dedup();
        Ok(Self { group, generators, steps })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    fn element(&self, v: &VertexId) -> Result<Element, GraphError> {
        Element::from_vertex(v)
            .filter(|x| self.group.contains(x))
            .ok_or_else(|| GraphError::InvalidVertex(v.clone()))
    }
}

impl LazyGraph for CayleyGraph {
    fn base(&self) -> VertexId {
        self.group.identity().to_vertex()
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.element(v).is_ok()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let g = self.element(v)?;
        let mut out = self
            .steps
            .iter()
            .map(|s| self.group.multiply(&g, s).map(|x| x.to_vertex()))
            .collect::<Result<Vec<_>, GroupError>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn family(&self) -> Family {
        Family::Cayley
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ball, distance, find_geodesic};

    fn int(i: i64) -> Element {
        Element::Int(i)
    }

    #[test]
    fn integers_with_unit_generators_form_a_path() {
        let g = CayleyGraph::new(Group::Integers, vec![int(1), int(-1)]).unwrap();
        assert_eq!(g.neighbors(&VertexId::Int(0)).unwrap(), vec![VertexId::Int(-1), VertexId::Int(1)]);
        let p = find_geodesic(&g, &g.base(), 3).unwrap();
        assert_eq!(p.vertices, [0, -1, -2, -3].map(VertexId::Int));
    }

    #[test]
    fn cyclic_group_gives_cycle() {
        let g = CayleyGraph::new(Group::Cyclic { m: 5 }, vec![int(1)]).unwrap();
        assert_eq!(ball(&g, &g.base(), 2).unwrap().len(), 5);
        assert_eq!(distance(&g, &VertexId::Int(0), &VertexId::Int(3), 10).unwrap(), Some(2));
        assert!(g.neighbors(&VertexId::Int(5)).is_err());
    }

    #[test]
    fn identity_generator_rejected() {
        assert!(CayleyGraph::new(Group::Integers, vec![int(0)]).is_err());
        assert!(CayleyGraph::new(Group::Cyclic { m: 2 }, vec![int(3)]).is_err());
    }

    #[test]
    fn lamplighter_group_is_three_regular() {
        let grp = Group::wreath(Group::Cyclic { m: 2 }, Group::Integers);
        let gens = vec![
            grp.embed_left(&int(1)).unwrap(),
            grp.embed_right(&int(1)).unwrap(),
            grp.embed_right(&int(-1)).unwrap(),
        ];
        let g = CayleyGraph::new(grp, gens).unwrap();
        for v in ball(&g, &g.base(), 3).unwrap() {
            assert_eq!(g.neighbors(&v).unwrap().len(), 3);
        }
    }
}
