use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::LampError;
use crate::graph::{GraphError, GraphRef, GraphSpec};
use crate::support::FinSupportedMap;
use crate::vertex::VertexId;
use crate::wreath::WreathProduct;

/// Serializable streetmap description:
/// `{"omega":{..},"base_state":0,"lambda":{..}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreetmapSpec {
    pub omega: GraphSpec,
    pub base_state: VertexId,
    pub lambda: GraphSpec,
}

impl StreetmapSpec {
    pub fn short_name(&self) -> String {
        format!("({},{},{})", self.omega.short_name(), self.base_state, self.lambda.short_name())
    }
}

/// A streetmap `(Omega, omega, Lambda)`: lamps are the vertices of `Lambda`,
/// each in a state from `Omega`, with default state `omega`.
///
/// Both graphs are assumed simple and connected; connectivity of an infinite
/// graph is not checked.
#[derive(Debug)]
pub struct Streetmap {
    omega: GraphRef,
    base_state: VertexId,
    lambda: GraphRef,
    wreath: Arc<WreathProduct>,
    spec: Option<StreetmapSpec>,
}

/// A player's board: position `p` and lamp states `phi` (lamps in the base
/// state are not stored).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Board {
    pub p: VertexId,
    pub phi: FinSupportedMap<VertexId, VertexId>,
}

impl fmt::Debug for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<p={:?} {:?}>", self.p, self.phi)
    }
}

/// An atomic move: walk to an adjacent lamp, or change the state of the lamp
/// under the player to an adjacent state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Move {
    Walk { to: VertexId },
    SetState { new_state: VertexId },
}

impl Streetmap {
    pub fn new(omega: GraphRef, base_state: VertexId, lambda: GraphRef) -> Result<Self, GraphError> {
        let wreath = Arc::new(WreathProduct::new(omega.clone(), base_state.clone(), lambda.clone())?);
        Ok(Self { omega, base_state, lambda, wreath, spec: None })
    }

    pub fn from_spec(spec: &StreetmapSpec) -> Result<Self, GraphError> {
        let mut m = Self::new(spec.omega.build()?, spec.base_state.clone(), spec.lambda.build()?)?;
        m.spec = Some(spec.clone());
        Ok(m)
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

    /// `Omega wr Lambda` over the same graph objects.
    pub fn wreath(&self) -> &Arc<WreathProduct> {
        &self.wreath
    }

    pub fn spec(&self) -> Option<&StreetmapSpec> {
        self.spec.as_ref()
    }

    pub fn name(&self) -> String {
        match &self.spec {
            Some(s) => s.short_name(),
            None => format!("({:?},{},{:?})", self.omega.family(), self.base_state, self.lambda.family()),
        }
    }

    /// Board at `p` with every lamp in the base state.
    pub fn default_board(&self, p: VertexId) -> Board {
        Board { p, phi: FinSupportedMap::new() }
    }

    pub fn is_valid_board(&self, b: &Board) -> bool {
        self.lambda.contains(&b.p) && self.wreath.is_configuration(&b.phi)
    }

    pub fn check_board(&self, b: &Board) -> Result<(), LampError> {
        if self.is_valid_board(b) {
            Ok(())
        } else {
            Err(LampError::StreetmapMismatch(format!("{b:?} is not a board of {}", self.name())))
        }
    }

    pub fn state_at<'a>(&'a self, b: &'a Board, lamp: &VertexId) -> &'a VertexId {
        b.phi.get_or(lamp, &self.base_state)
    }

    /// Every single-move successor of `b`: walks first, then state changes,
    /// each in vertex order.
    pub fn single_moves(&self, b: &Board) -> Result<Vec<(Move, Board)>, GraphError> {
        let mut out = Vec::new();
        for to in self.lambda.neighbors(&b.p)? {
            out.push((Move::Walk { to: to.clone() }, Board { p: to, phi: b.phi.clone() }));
        }
        for s in self.omega.neighbors(self.state_at(b, &b.p))? {
            let phi = b.phi.with(b.p.clone(), s.clone(), &self.base_state);
            out.push((Move::SetState { new_state: s }, Board { p: b.p.clone(), phi }));
        }
        Ok(out)
    }

    /// Applies `mv` to `b` ignoring any area-of-play restriction. Returns
    /// `None` when the target is not adjacent.
    pub fn apply(&self, b: &Board, mv: &Move) -> Result<Option<Board>, GraphError> {
        Ok(match mv {
            Move::Walk { to } => {
                let ok = self.lambda.neighbors(&b.p)?.binary_search(to).is_ok();
                ok.then(|| Board { p: to.clone(), phi: b.phi.clone() })
            }
            Move::SetState { new_state } => {
                let current = self.state_at(b, &b.p);
                let ok = self.omega.neighbors(current)?.binary_search(new_state).is_ok();
                ok.then(|| Board {
                    p: b.p.clone(),
                    phi: b.phi.with(b.p.clone(), new_state.clone(), &self.base_state),
                })
            }
        })
    }

    /// Minimum number of moves turning `b1` into `b2`, if at most `cutoff`.
    pub fn board_distance(&self, b1: &Board, b2: &Board, cutoff: u64) -> Result<Option<u64>, LampError> {
        self.check_board(b1)?;
        self.check_board(b2)?;
        Ok(self.wreath.configuration_distance(&b1.phi, &b1.p, &b2.phi, &b2.p, cutoff)?)
    }
}
