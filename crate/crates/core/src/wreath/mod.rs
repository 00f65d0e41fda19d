//! Restricted wreath products of graphs, the graph of boards of a streetmap,
//! and the identifications that connect them with each other and with Cayley
//! graphs of group wreath products.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ball, Family, GraphError, GraphRef, LazyGraph, Metric};
use crate::group::{CayleyGraph, Element, Group, GroupError};
use crate::lamp::{Board, Streetmap};
use crate::support::FinSupportedMap;
use crate::vertex::{VertexId, WreathVertex};

mod metric;

pub use metric::HELD_KARP_LIMIT;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WreathError {
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `Omega wr Lambda` with base state `omega`.
///
/// Vertices are `(f, v)` with `f` a finitely supported lamp configuration.
/// Type-1 edges change the state of the lamp at `v` along an edge of `Omega`;
/// type-2 edges move `v` along an edge of `Lambda`.
#[derive(Debug, Clone)]
pub struct WreathProduct {
    omega: GraphRef,
    base_state: VertexId,
    lambda: GraphRef,
}

impl WreathProduct {
    pub fn new(omega: GraphRef, base_state: VertexId, lambda: GraphRef) -> Result<Self, GraphError> {
        omega.check(&base_state)?;
        Ok(Self { omega, base_state, lambda })
    }

    pub fn omega(&self) -> &GraphRef {
        &self.omega
    }

    pub fn lambda(&self) -> &GraphRef {
        &self.lambda
    }

    pub fn base_state(&self) -> &VertexId {
        &self.base_state
    }

    /// True when both products are built over the same graph objects.
    pub fn same_factors(&self, omega: &GraphRef, base_state: &VertexId, lambda: &GraphRef) -> bool {
        Arc::ptr_eq(&self.omega, omega) && Arc::ptr_eq(&self.lambda, lambda) && self.base_state == *base_state
    }

    pub fn is_configuration(&self, f: &FinSupportedMap<VertexId, VertexId>) -> bool {
        f.is_canonical_for(&self.base_state)
            && f.iter().all(|(lamp, state)| self.lambda.contains(lamp) && self.omega.contains(state))
    }

    fn parts<'a>(&self, v: &'a VertexId) -> Result<&'a WreathVertex, GraphError> {
        v.as_wreath()
            .filter(|w| self.lambda.contains(&w.v) && self.is_configuration(&w.f))
            .ok_or_else(|| GraphError::InvalidVertex(v.clone()))
    }

    /// `deg_Omega(f(v)) + deg_Lambda(v)`.
    pub fn degree(&self, w: &WreathVertex) -> Result<usize, GraphError> {
        let state = w.f.get_or(&w.v, &self.base_state);
        Ok(self.omega.neighbors(state)?.len() + self.lambda.neighbors(&w.v)?.len())
    }

    /// Exact distance between `(f1, p1)` and `(f2, p2)` if at most `cutoff`.
    pub fn configuration_distance(
        &self,
        f1: &FinSupportedMap<VertexId, VertexId>,
        p1: &VertexId,
        f2: &FinSupportedMap<VertexId, VertexId>,
        p2: &VertexId,
        cutoff: u64,
    ) -> Result<Option<u64>, GraphError> {
        match metric::lamp_tour(self, f1, p1, f2, p2, cutoff)? {
            metric::Tour::Exact(d) => Ok(d),
            metric::Tour::TooManyLamps => crate::graph::distance(
                self,
                &VertexId::wreath(f1.clone(), p1.clone()),
                &VertexId::wreath(f2.clone(), p2.clone()),
                cutoff,
            ),
        }
    }
}

impl LazyGraph for WreathProduct {
    fn base(&self) -> VertexId {
        VertexId::wreath(FinSupportedMap::new(), self.lambda.base())
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.parts(v).is_ok()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let w = self.parts(v)?;
        let state = w.f.get_or(&w.v, &self.base_state);
        let mut out = Vec::new();
        for s in self.omega.neighbors(state)? {
            out.push(VertexId::wreath(w.f.with(w.v.clone(), s, &self.base_state), w.v.clone()));
        }
        for u in self.lambda.neighbors(&w.v)? {
            out.push(VertexId::wreath(w.f.clone(), u));
        }
        out.sort();
        Ok(out)
    }

    fn family(&self) -> Family {
        Family::Wreath
    }
}

impl Metric for WreathProduct {
    fn graph(&self) -> &dyn LazyGraph {
        self
    }

    fn distance(&self, u: &VertexId, v: &VertexId, cutoff: u64) -> Result<Option<u64>, GraphError> {
        let (a, b) = (self.parts(u)?, self.parts(v)?);
        self.configuration_distance(&a.f, &a.v, &b.f, &b.v, cutoff)
    }
}

/// The graph of `M`-boards: boards are adjacent when they differ by a single
/// move. The lamplighter's area-of-play restriction does not apply here.
#[derive(Debug, Clone)]
pub struct BoardGraph {
    streetmap: Arc<Streetmap>,
}

impl BoardGraph {
    pub fn new(streetmap: Arc<Streetmap>) -> Self {
        Self { streetmap }
    }

    fn board<'a>(&self, v: &'a VertexId) -> Result<&'a Board, GraphError> {
        v.as_board()
            .filter(|b| self.streetmap.is_valid_board(b))
            .ok_or_else(|| GraphError::InvalidVertex(v.clone()))
    }
}

impl LazyGraph for BoardGraph {
    fn base(&self) -> VertexId {
        self.streetmap.default_board(self.streetmap.lambda().base()).into()
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.board(v).is_ok()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let b = self.board(v)?;
        let mut out: Vec<VertexId> = self
            .streetmap
            .single_moves(b)?
            .into_iter()
            .map(|(_, nb)| nb.into())
            .collect();
        out.sort();
        Ok(out)
    }

    fn family(&self) -> Family {
        Family::BoardGraph
    }
}

impl Metric for BoardGraph {
    fn graph(&self) -> &dyn LazyGraph {
        self
    }

    fn distance(&self, u: &VertexId, v: &VertexId, cutoff: u64) -> Result<Option<u64>, GraphError> {
        let (a, b) = (self.board(u)?, self.board(v)?);
        self.streetmap.wreath().configuration_distance(&a.phi, &a.p, &b.phi, &b.p, cutoff)
    }
}

/// The bijection `(M, p, phi) -> (phi, p)` between boards of a streetmap and
/// vertices of `Omega wr Lambda`.
#[derive(Debug, Clone)]
pub struct BoardIsomorphism {
    streetmap: Arc<Streetmap>,
    wreath: Arc<WreathProduct>,
}

impl BoardIsomorphism {
    pub fn new(streetmap: Arc<Streetmap>, wreath: Arc<WreathProduct>) -> Result<Self, WreathError> {
        if !wreath.same_factors(streetmap.omega(), streetmap.base_state(), streetmap.lambda()) {
            return Err(WreathError::ParameterMismatch(
                "wreath product is not built over the streetmap's graphs".into(),
            ));
        }
        Ok(Self { streetmap, wreath })
    }

    /// Uses the streetmap's own wreath product.
    pub fn for_streetmap(streetmap: Arc<Streetmap>) -> Self {
        let wreath = streetmap.wreath().clone();
        Self { streetmap, wreath }
    }

    pub fn wreath(&self) -> &Arc<WreathProduct> {
        &self.wreath
    }

    pub fn phi(&self, b: &Board) -> Result<WreathVertex, WreathError> {
        if !self.streetmap.is_valid_board(b) {
            return Err(WreathError::ParameterMismatch(format!("{b:?} is not a board of this streetmap")));
        }
        Ok(WreathVertex { f: b.phi.clone(), v: b.p.clone() })
    }

    pub fn phi_inverse(&self, w: &WreathVertex) -> Result<Board, WreathError> {
        if !self.wreath.lambda().contains(&w.v) || !self.wreath.is_configuration(&w.f) {
            return Err(WreathError::ParameterMismatch(format!("{w:?} is not a vertex of the wreath product")));
        }
        Ok(Board { p: w.v.clone(), phi: w.f.clone() })
    }

    pub fn phi_vertex(&self, b: &Board) -> Result<VertexId, WreathError> {
        self.phi(b).map(VertexId::from)
    }

    pub fn phi_inverse_vertex(&self, v: &VertexId) -> Result<Board, WreathError> {
        let w = v
            .as_wreath()
            .ok_or_else(|| WreathError::ParameterMismatch(format!("{v} is not a wreath vertex")))?;
        self.phi_inverse(w)
    }

    /// Checks that `phi` maps the neighbor set of `b` in the board graph onto
    /// the neighbor set of `phi(b)` in the wreath product, and that
    /// `phi_inverse` undoes `phi` on `b` and on every neighbor.
    pub fn preserves_neighborhood(&self, b: &Board) -> Result<bool, WreathError> {
        let board_graph = BoardGraph::new(self.streetmap.clone());
        let bv: VertexId = b.clone().into();
        let image: BTreeSet<VertexId> = board_graph
            .neighbors(&bv)?
            .iter()
            .map(|nb| self.phi_vertex(nb.as_board().expect("board graph vertex")))
            .collect::<Result<_, _>>()?;
        let wv = self.phi_vertex(b)?;
        let target: BTreeSet<VertexId> = self.wreath.neighbors(&wv)?.into_iter().collect();
        let back: BTreeSet<VertexId> = target
            .iter()
            .map(|w| self.phi_inverse_vertex(w).map(VertexId::from))
            .collect::<Result<_, _>>()?;
        let original: BTreeSet<VertexId> = board_graph.neighbors(&bv)?.into_iter().collect();
        Ok(image == target && back == original && self.phi_inverse(&self.phi(b)?)? == *b)
    }
}

/// Outcome of comparing `Cay(G,S) wr Cay(H,T)` against `Cay(G wr H, S u T)`.
#[derive(Debug, Clone, Serialize)]
pub struct AgreementReport {
    pub radius: u64,
    pub vertices_checked: usize,
    pub mismatches: Vec<NeighborMismatch>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NeighborMismatch {
    pub vertex: VertexId,
    pub via_group: Vec<VertexId>,
    pub via_wreath: Vec<VertexId>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Over the ball of the given radius around the identity of `G wr H`, compare
/// the neighbors obtained by right multiplication with `S u T` with the
/// neighbors in the graph wreath product of the two Cayley graphs (group
/// elements and wreath vertices share one canonical [`VertexId`] form).
pub fn cayley_wreath_agreement(
    g: &Group,
    s: &[Element],
    h: &Group,
    t: &[Element],
    radius: u64,
) -> Result<AgreementReport, WreathError> {
    let product = Group::wreath(g.clone(), h.clone());
    let mut generators = Vec::with_capacity(s.len() + t.len());
    for x in s {
        generators.push(product.embed_left(x)?);
    }
    for y in t {
        generators.push(product.embed_right(y)?);
    }
    let cay_product = CayleyGraph::new(product, generators)?;
    let cay_g: GraphRef = Arc::new(CayleyGraph::new(g.clone(), s.to_vec())?);
    let cay_h: GraphRef = Arc::new(CayleyGraph::new(h.clone(), t.to_vec())?);
    let wreath = WreathProduct::new(cay_g, g.identity().to_vertex(), cay_h)?;

    if cay_product.base() != wreath.base() {
        return Err(WreathError::ParameterMismatch("identity and base vertex differ".into()));
    }
    let region = ball(&cay_product, &cay_product.base(), radius)?;
    let mut mismatches = Vec::new();
    for v in &region {
        let via_group = cay_product.neighbors(v)?;
        let via_wreath = wreath.neighbors(v)?;
        if via_group != via_wreath {
            mismatches.push(NeighborMismatch { vertex: v.clone(), via_group, via_wreath });
        }
    }
    Ok(AgreementReport { radius, vertices_checked: region.len(), mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{distance, isomorphism, materialize, Cycle, InfinitePath, PathGraph};

    fn p2() -> GraphRef {
        Arc::new(PathGraph::new(2).unwrap())
    }

    fn i(x: i64) -> VertexId {
        VertexId::Int(x)
    }

    fn lamps(pairs: &[(i64, i64)]) -> FinSupportedMap<VertexId, VertexId> {
        FinSupportedMap::from_entries(pairs.iter().map(|&(a, b)| (i(a), i(b))), &i(0))
    }

    #[test]
    fn neighbors_in_lamplighter_graph() {
        let w = WreathProduct::new(p2(), i(0), Arc::new(InfinitePath)).unwrap();
        // oracle: one state change at lamp 0, two position moves
        let expected = {
            let mut v = vec![
                VertexId::wreath(lamps(&[(0, 1)]), i(0)),
                VertexId::wreath(lamps(&[]), i(-1)),
                VertexId::wreath(lamps(&[]), i(1)),
            ];
            v.sort();
            v
        };
        assert_eq!(w.neighbors(&w.base()).unwrap(), expected);
    }

    #[test]
    fn finite_products_have_expected_size() {
        let w = WreathProduct::new(p2(), i(0), p2()).unwrap();
        let g = materialize(&w, 64).unwrap();
        assert_eq!(g.vertex_count(), 8);
        let c8 = materialize(&Cycle::new(8).unwrap(), 64).unwrap();
        assert!(isomorphism(&g, &c8).unwrap().is_some());

        let w = WreathProduct::new(p2(), i(0), Arc::new(Cycle::new(3).unwrap())).unwrap();
        let g = materialize(&w, 64).unwrap();
        assert_eq!(g.vertex_count(), 2usize.pow(3) * 3);
        assert!(g.vertices().iter().all(|v| g.degree(v) == Some(3)));
    }

    #[test]
    fn invalid_vertices_rejected() {
        let w = WreathProduct::new(p2(), i(0), Arc::new(InfinitePath)).unwrap();
        // stored base state is not canonical
        let bad = VertexId::wreath(FinSupportedMap::from_canonical(vec![(i(0), i(0))]), i(0));
        assert!(w.neighbors(&bad).is_err());
        assert!(w.neighbors(&VertexId::wreath(lamps(&[(0, 2)]), i(0))).is_err());
        assert!(w.neighbors(&i(0)).is_err());
        assert!(WreathProduct::new(p2(), i(5), Arc::new(InfinitePath)).is_err());
    }

    #[test]
    fn lamp_tour_matches_bfs_on_small_cases() {
        let w = WreathProduct::new(Arc::new(Cycle::new(5).unwrap()), i(0), Arc::new(InfinitePath)).unwrap();
        let cases = [
            (lamps(&[]), 0, lamps(&[(1, 1)]), 1),
            (lamps(&[]), 0, lamps(&[(1, 1)]), 0),
            (lamps(&[(-1, 2), (2, 3)]), 1, lamps(&[(0, 4)]), -2),
            (lamps(&[(3, 2)]), 3, lamps(&[(3, 3)]), 3),
        ];
        for (f1, p1, f2, p2) in cases {
            let a = VertexId::wreath(f1.clone(), i(p1));
            let b = VertexId::wreath(f2.clone(), i(p2));
            let bfs = distance(&w, &a, &b, 12).unwrap();
            assert_eq!(Metric::distance(&w, &a, &b, 12).unwrap(), bfs, "{a:?} -> {b:?}");
        }
    }

    #[test]
    fn cayley_agreement_lamplighter_radius_zero() {
        let r = cayley_wreath_agreement(
            &Group::Cyclic { m: 2 },
            &[Element::Int(1)],
            &Group::Integers,
            &[Element::Int(1), Element::Int(-1)],
            0,
        )
        .unwrap();
        assert_eq!(r.vertices_checked, 1);
        assert!(r.passed());
    }
}
