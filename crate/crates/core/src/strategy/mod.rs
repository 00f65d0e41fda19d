//! The lamplighter's winning strategy, the adversaries it is tested against,
//! a monitor for the strategy's invariants, and its transfer to a robber
//! strategy in weak cops and robbers.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{fast_distance, find_geodesic, GraphError, Path};
use crate::lamp::{Board, GameParams, GameState, LamplighterStrategy, Move, Streetmap, StrategyError};
use crate::vertex::VertexId;

mod copiers;
mod monitor;
mod transfer;

pub use copiers::{random_board, CopierSpec, GreedyChaser, RandomWalker, Stationary};
pub use monitor::{InvariantMonitor, Violation};
pub use transfer::{transfer_to_robber, TransferredRobber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("graph too small: {0}")]
    GraphTooSmall(String),
    #[error("the state graph has no edge at the base state")]
    TrivialStates,
    #[error("plan mismatch: {0}")]
    Mismatch(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<PlanError> for StrategyError {
    fn from(e: PlanError) -> Self {
        StrategyError(e.to_string())
    }
}

/// Role of a lamp on the path: `l1..ln`, then `m1..m(sigma+rho)`, then `r1..rn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Label {
    Left(usize),
    Middle(usize),
    Right(usize),
}

impl Label {
    /// Copier index (0-based) for `l` and `r` lamps.
    pub fn copier(&self) -> Option<usize> {
        match self {
            Label::Left(i) | Label::Right(i) => Some(i - 1),
            Label::Middle(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Left(i) => write!(f, "l{i}"),
            Label::Middle(i) => write!(f, "m{i}"),
            Label::Right(i) => write!(f, "r{i}"),
        }
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.to_string()
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad label {s:?}");
        let (kind, num) = s.split_at_checked(1).ok_or_else(bad)?;
        let i: usize = num.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        match kind {
            "l" => Ok(Label::Left(i)),
            "m" => Ok(Label::Middle(i)),
            "r" => Ok(Label::Right(i)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for Label {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledLamp {
    pub vertex: VertexId,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Heading {
    TowardL,
    TowardR,
}

/// The lamplighter's choices against `n` copiers of speed `sigma` and reach
/// `rho`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyPlan {
    pub n: usize,
    pub sigma: u32,
    pub rho: u32,
    pub psi: u32,
    pub r: u32,
    #[serde(rename = "R")]
    pub big_r: u64,
    /// Center of the area of play: the central vertex of `path`.
    pub v: VertexId,
    /// Geodesic with `sigma + rho + 2n` lamps, starting at `l1`.
    pub path: Path,
    pub labels: Vec<Label>,
    pub omega: VertexId,
    pub omega1: VertexId,
}

pub fn psi_for(n: usize, sigma: u32, rho: u32) -> u32 {
    3 * n as u32 + sigma + rho + 1
}

pub fn radius_for(n: usize, sigma: u32, rho: u32) -> u32 {
    (sigma + rho).div_ceil(2) + n as u32
}

pub fn path_lamps_for(n: usize, sigma: u32, rho: u32) -> usize {
    (sigma + rho) as usize + 2 * n
}

/// Radius of the robber's ball in the transferred strategy.
pub fn big_r_for(r: u32) -> u64 {
    2 * (6 * u64::from(r) + 1)
}

fn labels_for(n: usize, len: usize) -> Vec<Label> {
    (0..len)
        .map(|k| {
            if k < n {
                Label::Left(k + 1)
            } else if k >= len - n {
                Label::Right(k - (len - n) + 1)
            } else {
                Label::Middle(k - n + 1)
            }
        })
        .collect()
}

/// Computes the lamplighter's speed, radius, path and marked state.
pub fn plan_parameters(streetmap: &Streetmap, n: usize, sigma: u32, rho: u32) -> Result<StrategyPlan, PlanError> {
    if n == 0 || sigma == 0 || rho == 0 {
        return Err(PlanError::InvalidParams(format!(
            "n, sigma and rho must be positive (got n={n}, sigma={sigma}, rho={rho})"
        )));
    }
    let omega = streetmap.base_state().clone();
    let omega1 = streetmap.omega().neighbors(&omega)?.into_iter().min().ok_or(PlanError::TrivialStates)?;
    let psi = psi_for(n, sigma, rho);
    let r = radius_for(n, sigma, rho);
    let len = path_lamps_for(n, sigma, rho);
    let lambda = streetmap.lambda();
    let path = match find_geodesic(lambda.as_ref(), &lambda.base(), (len - 1) as u64) {
        Ok(p) => p,
        Err(GraphError::NotFound { .. }) => {
            return Err(PlanError::GraphTooSmall(format!(
                "no geodesic with {len} lamps from {}",
                lambda.base()
            )))
        }
        Err(e) => return Err(e.into()),
    };
    if !path.is_geodesic_in(lambda.as_ref()) {
        return Err(PlanError::InvariantViolation("path is not a geodesic".into()));
    }
    let v = path.vertices[len / 2].clone();
    for x in &path.vertices {
        if fast_distance(lambda.as_ref(), &v, x, u64::from(r))?.is_none() {
            return Err(PlanError::InvariantViolation(format!("{x} lies outside the area of play")));
        }
    }
    Ok(StrategyPlan {
        n,
        sigma,
        rho,
        psi,
        r,
        big_r: big_r_for(r),
        v,
        labels: labels_for(n, len),
        path,
        omega,
        omega1,
    })
}

impl StrategyPlan {
    pub fn len(&self) -> usize {
        self.path.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.vertices.is_empty()
    }

    pub fn labeled_lamps(&self) -> Vec<LabeledLamp> {
        self.path.vertices.iter().zip(&self.labels).map(|(v, l)| LabeledLamp { vertex: v.clone(), label: *l }).collect()
    }

    pub fn index_of(&self, x: &VertexId) -> Option<usize> {
        self.path.vertices.iter().position(|y| y == x)
    }

    pub fn lamps(&self) -> BTreeSet<VertexId> {
        self.path.vertices.iter().cloned().collect()
    }

    /// `l_i` for the 0-based copier index `i`.
    pub fn left(&self, i: usize) -> &VertexId {
        &self.path.vertices[i]
    }

    /// `r_i` for the 0-based copier index `i`.
    pub fn right(&self, i: usize) -> &VertexId {
        &self.path.vertices[self.len() - self.n + i]
    }

    /// Direction of the next sweep from an endpoint of the path.
    pub fn heading(&self, position: &VertexId) -> Option<Heading> {
        match self.index_of(position)? {
            0 => Some(Heading::TowardR),
            k if k + 1 == self.len() => Some(Heading::TowardL),
            _ => None,
        }
    }

    /// Board with every lamp at the base state, standing at the center.
    pub fn center_board(&self, streetmap: &Streetmap) -> Board {
        streetmap.default_board(self.v.clone())
    }

    pub fn game_params(&self) -> GameParams {
        GameParams { n: self.n, sigma: self.sigma, rho: self.rho, psi: self.psi, r: self.r, v: self.v.clone() }
    }

    fn check_streetmap(&self, streetmap: &Streetmap) -> Result<(), PlanError> {
        if streetmap.base_state() != &self.omega || !streetmap.omega().contains(&self.omega1) {
            return Err(PlanError::Mismatch("plan was made for another streetmap".into()));
        }
        Ok(())
    }
}

/// Copiers (0-based) whose board agrees with the lamplighter's at `l_i` or `r_i`.
pub fn disagreement_failures(
    plan: &StrategyPlan,
    streetmap: &Streetmap,
    lamplighter: &Board,
    copiers: &[Board],
) -> Vec<usize> {
    (0..plan.n.min(copiers.len()))
        .filter(|&i| {
            [plan.left(i), plan.right(i)]
                .iter()
                .any(|x| streetmap.state_at(lamplighter, x) == streetmap.state_at(&copiers[i], x))
        })
        .collect()
}

/// The lamplighter's starting board: at `l1`, with `l_i` and `r_i` set to
/// `omega1` exactly where copier `i` has the base state there.
pub fn initial_board(plan: &StrategyPlan, streetmap: &Streetmap, copiers: &[Board]) -> Result<Board, PlanError> {
    plan.check_streetmap(streetmap)?;
    if copiers.len() != plan.n {
        return Err(PlanError::Mismatch(format!("{} copier boards for {} copiers", copiers.len(), plan.n)));
    }
    let mut board = streetmap.default_board(plan.left(0).clone());
    for (i, c) in copiers.iter().enumerate() {
        for x in [plan.left(i), plan.right(i)] {
            if streetmap.state_at(c, x) == &plan.omega {
                board.phi.set(x.clone(), plan.omega1.clone(), &plan.omega);
            }
        }
    }
    let failures = disagreement_failures(plan, streetmap, &board, copiers);
    if !failures.is_empty() {
        return Err(PlanError::InvariantViolation(format!("initial board agrees with copiers {failures:?}")));
    }
    Ok(board)
}

/// One sweep from the current endpoint of the path to the other. Before
/// leaving each `l_i` or `r_i`, the lamp is switched between `omega` and
/// `omega1` if it matches copier `i`'s current board there.
pub fn lamplighter_turn(plan: &StrategyPlan, streetmap: &Streetmap, state: &GameState) -> Result<Vec<Move>, PlanError> {
    plan.check_streetmap(streetmap)?;
    let board = &state.lamplighter_board;
    let order: Vec<usize> = match plan.heading(&board.p) {
        Some(Heading::TowardR) => (0..plan.len()).collect(),
        Some(Heading::TowardL) => (0..plan.len()).rev().collect(),
        None => {
            return Err(PlanError::InvariantViolation(format!("lamplighter at {} is not at an end of the path", board.p)))
        }
    };
    let mut phi = board.phi.clone();
    let mut moves = Vec::with_capacity(plan.psi as usize);
    for (step, &k) in order.iter().enumerate() {
        let x = &plan.path.vertices[k];
        if let Some(i) = plan.labels[k].copier() {
            let mine = phi.get_or(x, &plan.omega).clone();
            let theirs = streetmap.state_at(&state.copier_boards[i], x);
            if &mine == theirs {
                let toggled = if mine == plan.omega {
                    plan.omega1.clone()
                } else if mine == plan.omega1 {
                    plan.omega.clone()
                } else {
                    return Err(PlanError::InvariantViolation(format!("lamp {x} is in state {mine}")));
                };
                phi.set(x.clone(), toggled.clone(), &plan.omega);
                moves.push(Move::SetState { new_state: toggled });
            }
        }
        if let Some(&next) = order.get(step + 1) {
            moves.push(Move::Walk { to: plan.path.vertices[next].clone() });
        }
    }
    if moves.len() > plan.psi as usize {
        return Err(PlanError::InvariantViolation(format!("sweep needs {} moves, speed is {}", moves.len(), plan.psi)));
    }
    Ok(moves)
}

/// The strategy as a pluggable lamplighter.
#[derive(Debug, Default)]
pub struct SweepLamplighter {
    plan: Option<StrategyPlan>,
}

impl SweepLamplighter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn plan(&self) -> Option<&StrategyPlan> {
        self.plan.as_ref()
    }

    fn require_plan(&self) -> Result<&StrategyPlan, StrategyError> {
        self.plan.as_ref().ok_or_else(|| StrategyError("parameters were never chosen".into()))
    }
}

impl LamplighterStrategy for SweepLamplighter {
    fn name(&self) -> String {
        "sweep".into()
    }

    fn choose_params(
        &mut self,
        streetmap: &Streetmap,
        n: usize,
        sigma: u32,
        rho: u32,
    ) -> Result<(u32, u32, VertexId), StrategyError> {
        let plan = plan_parameters(streetmap, n, sigma, rho)?;
        let out = (plan.psi, plan.r, plan.v.clone());
        self.plan = Some(plan);
        Ok(out)
    }

    fn initial_board(
        &mut self,
        streetmap: &Streetmap,
        _params: &GameParams,
        copier_boards: &[Board],
    ) -> Result<Board, StrategyError> {
        Ok(initial_board(self.require_plan()?, streetmap, copier_boards)?)
    }

    fn play_turn(&mut self, streetmap: &Streetmap, state: &GameState) -> Result<Vec<Move>, StrategyError> {
        Ok(lamplighter_turn(self.require_plan()?, streetmap, state)?)
    }
}

/// Lamplighter strategies selectable from a run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LamplighterSpec {
    Sweep,
}

impl LamplighterSpec {
    pub fn build(&self) -> Box<dyn LamplighterStrategy> {
        match self {
            LamplighterSpec::Sweep => Box::new(SweepLamplighter::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::{Cycle, InfinitePath, PathGraph};
    use crate::lamp::Phase;
    use crate::support::FinSupportedMap;

    fn i(x: i64) -> VertexId {
        VertexId::Int(x)
    }

    fn lamplighter_street() -> Streetmap {
        Streetmap::new(Arc::new(PathGraph::new(2).unwrap()), i(0), Arc::new(InfinitePath)).unwrap()
    }

    fn board(p: i64, lamps: &[(i64, i64)]) -> Board {
        Board { p: i(p), phi: FinSupportedMap::from_entries(lamps.iter().map(|&(a, b)| (i(a), i(b))), &i(0)) }
    }

    fn state_for(plan: &StrategyPlan, lamplighter: Board, copiers: Vec<Board>) -> GameState {
        GameState {
            params: plan.game_params(),
            area_of_play: plan.lamps(),
            lamplighter_board: lamplighter,
            copier_moves_used: vec![0; copiers.len()],
            copier_boards: copiers,
            turn: 1,
            phase: Phase::LamplighterToMove,
            lamplighter_moves_used: 0,
        }
    }

    #[test]
    fn parameter_examples() {
        let m = lamplighter_street();
        let p = plan_parameters(&m, 2, 3, 2).unwrap();
        assert_eq!((p.psi, p.r, p.len(), p.big_r), (12, 5, 9, 62));
        let p = plan_parameters(&m, 1, 1, 1).unwrap();
        assert_eq!((p.psi, p.r, p.len(), p.big_r), (6, 2, 4, 26));
        assert_eq!(p.omega1, i(1));
        assert_eq!(p.path.vertices, [0, -1, -2, -3].map(i));
        // index ceil((4 - 1) / 2) = 2
        assert_eq!(p.v, i(-2));
        let labels: Vec<String> = p.labels.iter().map(|l| l.to_string()).collect();
        assert_eq!(labels, ["l1", "m1", "m2", "r1"]);
    }

    #[test]
    fn small_lamp_graph_is_rejected() {
        let m = Streetmap::new(Arc::new(PathGraph::new(2).unwrap()), i(0), Arc::new(PathGraph::new(3).unwrap())).unwrap();
        assert!(matches!(plan_parameters(&m, 3, 3, 3), Err(PlanError::GraphTooSmall(_))));
    }

    #[test]
    fn labels_round_trip() {
        for l in [Label::Left(1), Label::Middle(12), Label::Right(3)] {
            let s = serde_json::to_string(&l).unwrap();
            assert_eq!(serde_json::from_str::<Label>(&s).unwrap(), l);
        }
        assert!("x1".parse::<Label>().is_err());
        assert!("l0".parse::<Label>().is_err());
    }

    #[test]
    fn initial_board_cases() {
        let m = lamplighter_street();
        let plan = plan_parameters(&m, 2, 1, 1).unwrap();
        // path 0..-5: l1=0 l2=-1 m1=-2 m2=-3 r1=-4 r2=-5
        let b = initial_board(&plan, &m, &[board(7, &[]), board(8, &[])]).unwrap();
        assert_eq!(b, board(0, &[(0, 1), (-1, 1), (-4, 1), (-5, 1)]));
        // copier 0 already has l1 lit: that lamp stays at the base state
        let b = initial_board(&plan, &m, &[board(7, &[(0, 1)]), board(8, &[])]).unwrap();
        assert_eq!(b, board(0, &[(-1, 1), (-4, 1), (-5, 1)]));
        assert!(initial_board(&plan, &m, &[board(7, &[])]).is_err());
    }

    #[test]
    fn initial_board_with_third_state() {
        let m = Streetmap::new(Arc::new(Cycle::new(5).unwrap()), i(0), Arc::new(InfinitePath)).unwrap();
        let plan = plan_parameters(&m, 1, 1, 1).unwrap();
        let b = initial_board(&plan, &m, &[board(3, &[(0, 2)])]).unwrap();
        assert_eq!(m.state_at(&b, &i(0)), &i(0));
        assert_eq!(m.state_at(&b, &i(-3)), &i(1));
        assert!(disagreement_failures(&plan, &m, &b, &[board(3, &[(0, 2)])]).is_empty());
    }

    #[test]
    fn sweep_without_copier_changes() {
        let m = lamplighter_street();
        let plan = plan_parameters(&m, 1, 1, 1).unwrap();
        let copiers = vec![board(5, &[])];
        let start = initial_board(&plan, &m, &copiers).unwrap();
        let moves = lamplighter_turn(&plan, &m, &state_for(&plan, start, copiers)).unwrap();
        assert_eq!(moves, [-1, -2, -3].map(|x| Move::Walk { to: i(x) }));
    }

    #[test]
    fn sweep_toggles_matched_lamp() {
        let m = lamplighter_street();
        let plan = plan_parameters(&m, 1, 1, 1).unwrap();
        let start = initial_board(&plan, &m, &[board(5, &[])]).unwrap();
        // copier lit r1 = -3 to match the lamplighter
        let copiers = vec![board(-3, &[(-3, 1)])];
        let moves = lamplighter_turn(&plan, &m, &state_for(&plan, start.clone(), copiers.clone())).unwrap();
        assert_eq!(
            moves,
            vec![
                Move::Walk { to: i(-1) },
                Move::Walk { to: i(-2) },
                Move::Walk { to: i(-3) },
                Move::SetState { new_state: i(0) },
            ]
        );
        let mut b = start;
        for mv in &moves {
            b = m.apply(&b, mv).unwrap().unwrap();
        }
        assert!(disagreement_failures(&plan, &m, &b, &copiers).is_empty());
        // and back again from the other end
        let back = lamplighter_turn(&plan, &m, &state_for(&plan, b, copiers)).unwrap();
        assert_eq!(back.len(), 3);
    }

    #[test]
    fn sweep_from_middle_is_a_violation() {
        let m = lamplighter_street();
        let plan = plan_parameters(&m, 1, 1, 1).unwrap();
        let s = state_for(&plan, board(-1, &[]), vec![board(5, &[])]);
        assert!(matches!(lamplighter_turn(&plan, &m, &s), Err(PlanError::InvariantViolation(_))));
    }
}
