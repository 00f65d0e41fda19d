use std::sync::Arc;

use super::{initial_board, lamplighter_turn, plan_parameters, StrategyPlan};
use crate::graph::{MetricRef, Path};
use crate::lamp::{Board, GameState, Phase, Streetmap, StrategyError};
use crate::vertex::VertexId;
use crate::wcr::{RobberStrategy, WcrParams, WcrState};
use crate::wreath::BoardIsomorphism;

/// The lamplighter strategy played as a robber on `Omega wr Lambda`:
/// vertices are read as boards, the cops as copiers, and each sweep becomes
/// one robber path.
#[derive(Debug)]
pub struct TransferredRobber {
    streetmap: Arc<Streetmap>,
    iso: BoardIsomorphism,
    plan: Option<StrategyPlan>,
}

/// The robber for an existing plan, with the parameters it declares: speed
/// `psi`, radius `R = 2(6r + 1)` and center the all-base board at `v`.
pub fn transfer_to_robber(plan: &StrategyPlan, streetmap: Arc<Streetmap>) -> (TransferredRobber, WcrParams) {
    let mut robber = TransferredRobber::new(streetmap);
    let params = robber.params_for(plan);
    robber.plan = Some(plan.clone());
    (robber, params)
}

impl TransferredRobber {
    pub fn new(streetmap: Arc<Streetmap>) -> Self {
        let iso = BoardIsomorphism::for_streetmap(streetmap.clone());
        Self { streetmap, iso, plan: None }
    }

    pub fn plan(&self) -> Option<&StrategyPlan> {
        self.plan.as_ref()
    }

    /// The wreath product the robber plays on.
    pub fn metric(&self) -> MetricRef {
        self.streetmap.wreath().clone()
    }

    fn params_for(&self, plan: &StrategyPlan) -> WcrParams {
        let center = self.iso.phi_vertex(&plan.center_board(&self.streetmap)).expect("center board is valid");
        WcrParams { n: plan.n, sigma: plan.sigma, rho: plan.rho, psi: plan.psi, big_r: plan.big_r, v: center }
    }

    fn board(&self, v: &VertexId) -> Result<Board, StrategyError> {
        self.iso.phi_inverse_vertex(v).map_err(|e| StrategyError(e.to_string()))
    }

    fn require_plan(&self) -> Result<&StrategyPlan, StrategyError> {
        self.plan.as_ref().ok_or_else(|| StrategyError("parameters were never chosen".into()))
    }
}

impl RobberStrategy for TransferredRobber {
    fn name(&self) -> String {
        "transferred".into()
    }

    fn choose_params(
        &mut self,
        _: &MetricRef,
        n: usize,
        sigma: u32,
        rho: u32,
    ) -> Result<(u32, u64, VertexId), StrategyError> {
        if self.plan.is_none() {
            self.plan = Some(plan_parameters(&self.streetmap, n, sigma, rho)?);
        }
        let params = self.params_for(self.require_plan()?);
        Ok((params.psi, params.big_r, params.v))
    }

    fn initial_position(&mut self, _: &MetricRef, _: &WcrParams, cops: &[VertexId]) -> Result<VertexId, StrategyError> {
        let boards = cops.iter().map(|c| self.board(c)).collect::<Result<Vec<_>, _>>()?;
        let b = initial_board(self.require_plan()?, &self.streetmap, &boards)?;
        self.iso.phi_vertex(&b).map_err(|e| StrategyError(e.to_string()))
    }

    fn play_turn(&mut self, _: &MetricRef, state: &WcrState) -> Result<Path, StrategyError> {
        let plan = self.require_plan()?;
        let lamplighter = self.board(&state.robber_position)?;
        let copiers = state.cop_positions.iter().map(|c| self.board(c)).collect::<Result<Vec<_>, _>>()?;
        let view = GameState {
            params: plan.game_params(),
            area_of_play: plan.lamps(),
            lamplighter_board: lamplighter.clone(),
            copier_moves_used: vec![0; copiers.len()],
            copier_boards: copiers,
            turn: state.turn,
            phase: Phase::LamplighterToMove,
            lamplighter_moves_used: 0,
        };
        let moves = lamplighter_turn(plan, &self.streetmap, &view)?;
        let mut b = lamplighter;
        let mut vertices = vec![state.robber_position.clone()];
        for mv in &moves {
            b = self
                .streetmap
                .apply(&b, mv)
                .map_err(|e| StrategyError(e.to_string()))?
                .ok_or_else(|| StrategyError(format!("sweep move {mv:?} is not adjacent")))?;
            vertices.push(self.iso.phi_vertex(&b).map_err(|e| StrategyError(e.to_string()))?);
        }
        Ok(Path { vertices })
    }
}
