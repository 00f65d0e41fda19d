use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::{BoardsResponse, ClientMessage, CreateRequest, CreateResponse, ServerMessage};
use wreathgame_core::lamp::{Actor, Board, GameConfig, LampError, LampGame, Move, Phase, Snapshot, Streetmap};
use wreathgame_core::strategy::{initial_board, lamplighter_turn, plan_parameters, PlanError, StrategyPlan};
use wreathgame_core::trace::GameTrace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    GraphTooSmall(String),
    #[error("{0}")]
    WrongPhase(String),
    #[error("{0}")]
    MalformedBoard(String),
    /// The automated lamplighter broke; the game is recorded as a fault.
    #[error("{0}")]
    Internal(String),
}

impl SessionError {
    /// Machine-readable error code for HTTP bodies.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::Invalid(_) => "config-invalid",
            SessionError::GraphTooSmall(_) => "graph-too-small",
            SessionError::WrongPhase(_) => "wrong-phase",
            SessionError::MalformedBoard(_) => "malformed-board",
            SessionError::Internal(_) => "internal",
        }
    }
}

/// Protocol phase as seen by clients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolPhase {
    AwaitingParams,
    AwaitingCopierBoards,
    InPlay,
    Finished,
}

/// Every mutation a session has accepted, in order. Replaying the log from
/// the creation request reproduces the session exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    Boards { boards: Vec<Board> },
    Client { message: ClientMessage },
    Teleport { copier: usize, board: Board },
}

/// One game of human copiers against the automated lamplighter. All state
/// changes go through the methods below; nothing here does I/O.
#[derive(Debug)]
pub struct Session {
    request: CreateRequest,
    plan: StrategyPlan,
    game: LampGame,
    log: Vec<Action>,
}

fn lamp_err(e: LampError) -> SessionError {
    match e {
        LampError::WrongPhase { .. } => SessionError::WrongPhase(e.to_string()),
        LampError::InvalidBoard { .. } | LampError::StreetmapMismatch(_) => SessionError::MalformedBoard(e.to_string()),
        other => SessionError::Invalid(other.to_string()),
    }
}

impl Session {
    /// Builds the streetmap and the lamplighter's plan, and declares the plan
    /// to the engine.
    pub fn create(request: CreateRequest) -> Result<Self, SessionError> {
        let CreateRequest { n, sigma, rho, .. } = request;
        if n == 0 || sigma == 0 || rho == 0 {
            return Err(SessionError::Invalid(format!("n, sigma and rho must be positive (got {n}, {sigma}, {rho})")));
        }
        let streetmap = Streetmap::from_spec(&request.streetmap)
            .map(Arc::new)
            .map_err(|e| SessionError::Invalid(format!("streetmap: {e}")))?;
        let plan = plan_parameters(&streetmap, n, sigma, rho).map_err(|e| match e {
            PlanError::GraphTooSmall(m) => SessionError::GraphTooSmall(m),
            other => SessionError::Invalid(other.to_string()),
        })?;
        let config = GameConfig { budget: request.budget, ..GameConfig::default() };
        let mut game = LampGame::new(streetmap, n, sigma, rho, config).map_err(lamp_err)?;
        game.declare_lamplighter_params(plan.psi, plan.r, plan.v.clone()).map_err(lamp_err)?;
        Ok(Self { request, plan, game, log: Vec::new() })
    }

    /// Rebuilds a session from its creation request and action log.
    pub fn replay(request: CreateRequest, log: &[Action]) -> Result<Self, SessionError> {
        let mut s = Self::create(request)?;
        for a in log {
            match a {
                Action::Boards { boards } => {
                    s.submit_boards(boards.clone())?;
                }
                Action::Client { message } => {
                    s.handle(message.clone());
                }
                Action::Teleport { copier, board } => {
                    s.teleport(*copier, board.clone())?;
                }
            }
        }
        Ok(s)
    }

    pub fn disclosure(&self, session_id: &str) -> CreateResponse {
        CreateResponse {
            session_id: session_id.to_string(),
            psi: self.plan.psi,
            r: self.plan.r,
            v: self.plan.v.clone(),
            path_labels: self.plan.labeled_lamps(),
            omega1: self.plan.omega1.clone(),
        }
    }

    pub fn request(&self) -> &CreateRequest {
        &self.request
    }

    pub fn plan(&self) -> &StrategyPlan {
        &self.plan
    }

    pub fn log(&self) -> &[Action] {
        &self.log
    }

    pub fn snapshot(&self) -> Snapshot {
        self.game.snapshot()
    }

    pub fn trace(&self) -> &GameTrace {
        self.game.trace()
    }

    pub fn phase(&self) -> ProtocolPhase {
        match self.game.phase() {
            Phase::AwaitingLamplighterParams => ProtocolPhase::AwaitingParams,
            Phase::AwaitingCopierBoards | Phase::AwaitingLamplighterBoard => ProtocolPhase::AwaitingCopierBoards,
            Phase::CopiersToMove | Phase::LamplighterToMove => ProtocolPhase::InPlay,
            Phase::Finished => ProtocolPhase::Finished,
        }
    }

    /// Places the copiers, then the lamplighter answers with its board.
    pub fn submit_boards(&mut self, boards: Vec<Board>) -> Result<BoardsResponse, SessionError> {
        if self.game.phase() != Phase::AwaitingCopierBoards {
            return Err(SessionError::WrongPhase(format!("boards were already submitted (game is {:?})", self.game.phase())));
        }
        if boards.len() != self.plan.n {
            return Err(SessionError::MalformedBoard(format!("{} boards for {} copiers", boards.len(), self.plan.n)));
        }
        self.game.place_copiers(boards.clone()).map_err(lamp_err)?;
        self.log.push(Action::Boards { boards });
        let streetmap = self.game.streetmap().clone();
        let board = match initial_board(&self.plan, &streetmap, self.game.copier_boards()) {
            Ok(b) => b,
            Err(e) => return Err(self.internal(e.to_string())),
        };
        let win = match self.game.place_lamplighter(board.clone()) {
            Ok(w) => w,
            Err(e) => return Err(self.internal(e.to_string())),
        };
        Ok(BoardsResponse { lamplighter_board: board, win })
    }

    /// Handles one client message and returns the replies in send order.
    /// Illegal moves change nothing and are not logged.
    pub fn handle(&mut self, message: ClientMessage) -> Vec<ServerMessage> {
        let mut out = Vec::new();
        match &message {
            ClientMessage::Move { copier, mv } => match self.game.apply_move(Actor::Copier(*copier), mv) {
                Err(e) => return vec![ServerMessage::Illegal { reason: e.reason.to_string(), detail: e.detail }],
                Ok(res) => {
                    out.push(ServerMessage::Applied { copier: *copier, mv: mv.clone() });
                    if let Some(w) = res.win {
                        out.push(ServerMessage::Win { copier: w });
                    }
                }
            },
            ClientMessage::EndTurn => {
                if let Err(e) = self.game.end_turn() {
                    return vec![ServerMessage::Illegal { reason: e.reason.to_string(), detail: e.detail }];
                }
                match self.lamplighter_reply() {
                    Ok((moves, win)) => {
                        out.push(ServerMessage::LamplighterTurn { moves });
                        if let Some(w) = win {
                            out.push(ServerMessage::Win { copier: w });
                        }
                    }
                    Err(e) => out.push(ServerMessage::Error { detail: e.to_string() }),
                }
            }
        }
        self.log.push(Action::Client { message });
        out.push(ServerMessage::State { snapshot: self.snapshot() });
        out
    }

    /// Debug only: moves a copier's board anywhere, outside the rules.
    pub fn teleport(&mut self, copier: usize, board: Board) -> Result<Option<usize>, SessionError> {
        let win = self.game.teleport_copier(copier, board.clone()).map_err(lamp_err)?;
        self.log.push(Action::Teleport { copier, board });
        Ok(win)
    }

    /// Plays the lamplighter's whole turn. A copier win mid-sweep stops it.
    fn lamplighter_reply(&mut self) -> Result<(Vec<Move>, Option<usize>), SessionError> {
        let streetmap = self.game.streetmap().clone();
        let state = self.game.state().expect("in play");
        let moves = match lamplighter_turn(&self.plan, &streetmap, state) {
            Ok(m) => m,
            Err(e) => return Err(self.internal(e.to_string())),
        };
        let mut played = Vec::with_capacity(moves.len());
        for mv in moves {
            match self.game.apply_move(Actor::Lamplighter, &mv) {
                Ok(res) => {
                    played.push(mv);
                    if res.win.is_some() {
                        return Ok((played, res.win));
                    }
                }
                Err(e) => return Err(self.internal(format!("lamplighter move {mv:?}: {e}"))),
            }
        }
        self.game.end_turn().map_err(|e| self.internal(e.to_string()))?;
        Ok((played, None))
    }

    fn internal(&mut self, reason: String) -> SessionError {
        self.game.record_fault("L", reason.clone());
        SessionError::Internal(reason)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wreathgame_core::graph::GraphSpec;
    use wreathgame_core::lamp::{Outcome, StreetmapSpec};
    use wreathgame_core::support::FinSupportedMap;
    use wreathgame_core::vertex::VertexId;

    fn i(x: i64) -> VertexId {
        VertexId::Int(x)
    }

    fn request(n: usize, sigma: u32, rho: u32, lambda: GraphSpec) -> CreateRequest {
        CreateRequest {
            streetmap: StreetmapSpec { omega: GraphSpec::Path { k: 2 }, base_state: i(0), lambda },
            n,
            sigma,
            rho,
            budget: Default::default(),
        }
    }

    fn blank(p: i64) -> Board {
        Board { p: i(p), phi: FinSupportedMap::new() }
    }

    #[test]
    fn disclosure_for_the_smallest_game() {
        let s = Session::create(request(1, 1, 1, GraphSpec::InfinitePath)).unwrap();
        let d = s.disclosure("x");
        assert_eq!((d.psi, d.r, d.path_labels.len()), (6, 2, 4));
        assert_eq!(d.omega1, i(1));
        assert_eq!(s.phase(), ProtocolPhase::AwaitingCopierBoards);
    }

    #[test]
    fn creation_errors() {
        assert!(matches!(Session::create(request(1, 0, 1, GraphSpec::InfinitePath)), Err(SessionError::Invalid(_))));
        assert!(matches!(
            Session::create(request(3, 3, 3, GraphSpec::Path { k: 3 })),
            Err(SessionError::GraphTooSmall(_))
        ));
    }

    #[test]
    fn boards_then_play() {
        let mut s = Session::create(request(1, 1, 1, GraphSpec::InfinitePath)).unwrap();
        let plan = s.plan().clone();
        let resp = s.submit_boards(vec![blank(0)]).unwrap();
        // all-base copier: the lamplighter lights l1 and r1
        for lamp in [plan.left(0), plan.right(0)] {
            assert_eq!(resp.lamplighter_board.phi.get(lamp), Some(&i(1)));
        }
        assert_eq!(resp.win, None);
        assert!(matches!(s.submit_boards(vec![blank(0)]), Err(SessionError::WrongPhase(_))));

        let out = s.handle(ClientMessage::Move { copier: 0, mv: Move::Walk { to: i(1) } });
        assert!(matches!(out[0], ServerMessage::Applied { copier: 0, .. }));
        let out = s.handle(ClientMessage::Move { copier: 0, mv: Move::Walk { to: i(2) } });
        assert!(matches!(&out[0], ServerMessage::Illegal { reason, .. } if reason == "speed-exhausted"));
        let out = s.handle(ClientMessage::EndTurn);
        match &out[0] {
            ServerMessage::LamplighterTurn { moves } => assert!(moves.len() <= plan.psi as usize),
            other => panic!("{other:?}"),
        }
        assert!(matches!(out.last(), Some(ServerMessage::State { .. })));
    }

    #[test]
    fn malformed_board_is_rejected() {
        let mut s = Session::create(request(1, 1, 1, GraphSpec::InfinitePath)).unwrap();
        let bad = Board { p: i(0), phi: FinSupportedMap::from_entries([(i(3), i(7))], &i(0)) };
        assert!(matches!(s.submit_boards(vec![bad]), Err(SessionError::MalformedBoard(_))));
        assert!(matches!(s.submit_boards(vec![]), Err(SessionError::MalformedBoard(_))));
        assert!(s.submit_boards(vec![blank(0)]).is_ok());
    }

    #[test]
    fn teleport_wins_and_replay_matches() {
        let mut s = Session::create(request(1, 1, 1, GraphSpec::InfinitePath)).unwrap();
        s.submit_boards(vec![blank(-3)]).unwrap();
        s.handle(ClientMessage::Move { copier: 0, mv: Move::Walk { to: i(-2) } });
        s.handle(ClientMessage::EndTurn);
        let target = s.snapshot().state.unwrap().lamplighter_board;
        assert_eq!(s.teleport(0, target).unwrap(), Some(0));
        assert!(matches!(s.snapshot().outcome, Some(Outcome::CopierWin { copier: 0 })));
        assert_eq!(s.phase(), ProtocolPhase::Finished);
        let again = Session::replay(s.request().clone(), s.log()).unwrap();
        assert_eq!(again.snapshot(), s.snapshot());
        assert_eq!(again.trace().to_ndjson(), s.trace().to_ndjson());
    }
}
