use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Actor, Board, IllegalMove, IllegalReason, LampError, Move, Streetmap};
use crate::graph::ball;
use crate::trace::{digest_of, Event, EventKind, GameTrace};
use crate::vertex::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameParams {
    pub n: usize,
    pub sigma: u32,
    pub rho: u32,
    pub psi: u32,
    pub r: u32,
    pub v: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    AwaitingLamplighterParams,
    AwaitingCopierBoards,
    AwaitingLamplighterBoard,
    CopiersToMove,
    LamplighterToMove,
    Finished,
}

/// How the copiers' speed is spent: `sigma` moves for each copier, or
/// `sigma` moves shared by all copiers in a turn.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopierBudget {
    #[default]
    PerCopier,
    Shared,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameConfig {
    pub budget: CopierBudget,
    /// Distances up to this value are written to the trace; larger ones are
    /// `null`. Defaults to `rho + sigma + 2`.
    pub report_cutoff: Option<u64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub params: GameParams,
    pub area_of_play: BTreeSet<VertexId>,
    pub lamplighter_board: Board,
    pub copier_boards: Vec<Board>,
    pub turn: u64,
    pub phase: Phase,
    pub lamplighter_moves_used: u32,
    pub copier_moves_used: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Survived,
    CopierWin { copier: usize },
    Fault { actor: String, reason: String },
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Survived => "survived",
            Outcome::CopierWin { .. } => "copier_win",
            Outcome::Fault { .. } => "fault",
        }
    }
}

/// Result of one accepted atomic move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveOutcome {
    pub board: Board,
    pub dist_min: Option<u64>,
    pub win: Option<usize>,
}

/// Everything a client needs to render the game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub phase: Phase,
    pub state: Option<GameState>,
    pub dist_min: Option<u64>,
    pub outcome: Option<Outcome>,
    pub boards_digest: Option<String>,
}

/// Stepwise rules engine. Setup runs in the fixed order: copiers' speed and
/// reach (given to [`LampGame::new`]), the lamplighter's speed, radius and
/// center, the copiers' boards, the lamplighter's board. Play then
/// alternates turns starting with the copiers. The copiers win as soon as
/// some copier's board is within `rho` of the lamplighter's board, which is
/// checked after setup and after every atomic move.
#[derive(Debug, Clone)]
pub struct LampGame {
    streetmap: Arc<Streetmap>,
    config: GameConfig,
    n: usize,
    sigma: u32,
    rho: u32,
    phase: Phase,
    params: Option<GameParams>,
    area: BTreeSet<VertexId>,
    copiers: Vec<Board>,
    state: Option<GameState>,
    distances: Vec<Option<u64>>,
    outcome: Option<Outcome>,
    trace: GameTrace,
}

impl LampGame {
    pub fn new(streetmap: Arc<Streetmap>, n: usize, sigma: u32, rho: u32, config: GameConfig) -> Result<Self, LampError> {
        if n == 0 || sigma == 0 || rho == 0 {
            return Err(LampError::InvalidParams(format!(
                "n, sigma and rho must be positive (got n={n}, sigma={sigma}, rho={rho})"
            )));
        }
        let mut game = Self {
            streetmap,
            config,
            n,
            sigma,
            rho,
            phase: Phase::AwaitingLamplighterParams,
            params: None,
            area: BTreeSet::new(),
            copiers: Vec::new(),
            state: None,
            distances: Vec::new(),
            outcome: None,
            trace: GameTrace::default(),
        };
        let streetmap_field = match game.streetmap.spec() {
            Some(spec) => serde_json::to_value(spec).expect("serializable spec"),
            None => serde_json::Value::String(game.streetmap.name()),
        };
        let header = game
            .event(EventKind::Setup)
            .field("step", "header")
            .field("seed", game.config.seed)
            .field("streetmap", streetmap_field)
            .field("n", n)
            .field("budget", game.config.budget);
        game.trace.push(header);
        let e = game.event(EventKind::Setup).field("step", "copier_params").field("sigma", sigma).field("rho", rho);
        game.trace.push(e);
        Ok(game)
    }

    fn event(&self, kind: EventKind) -> Event {
        Event::new(self.trace.len() as u64, kind)
    }

    fn expect_phase(&self, expected: Phase) -> Result<(), LampError> {
        if self.phase == expected {
            Ok(())
        } else {
            Err(LampError::WrongPhase { expected, actual: self.phase })
        }
    }

    pub fn streetmap(&self) -> &Arc<Streetmap> {
        &self.streetmap
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn rho(&self) -> u32 {
        self.rho
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn params(&self) -> Option<&GameParams> {
        self.params.as_ref()
    }

    pub fn area_of_play(&self) -> &BTreeSet<VertexId> {
        &self.area
    }

    /// Copier boards placed so far (also available before play starts).
    pub fn copier_boards(&self) -> &[Board] {
        match &self.state {
            Some(s) => &s.copier_boards,
            None => &self.copiers,
        }
    }

    /// The in-play state, once both players have placed their boards.
    pub fn state(&self) -> Option<&GameState> {
        self.state.as_ref()
    }

    pub fn outcome(&self) -> Option<&Outcome> {
        self.outcome.as_ref()
    }

    pub fn trace(&self) -> &GameTrace {
        &self.trace
    }

    pub fn into_trace(self) -> GameTrace {
        self.trace
    }

    pub fn report_cutoff(&self) -> u64 {
        let default = u64::from(self.rho) + u64::from(self.sigma) + 2;
        self.config.report_cutoff.unwrap_or(default).max(u64::from(self.rho))
    }

    /// Smallest reported copier distance, `None` when all exceed the report cutoff.
    pub fn dist_min(&self) -> Option<u64> {
        self.distances.iter().flatten().min().copied()
    }

    pub fn boards_digest(&self) -> Option<String> {
        self.state.as_ref().map(|s| digest_of(&(&s.lamplighter_board, &s.copier_boards)))
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            phase: self.phase,
            state: self.state.clone(),
            dist_min: self.dist_min(),
            outcome: self.outcome.clone(),
            boards_digest: self.boards_digest(),
        }
    }

    /// The lamplighter declares speed `psi`, radius `r` and center `v`.
    pub fn declare_lamplighter_params(&mut self, psi: u32, r: u32, v: VertexId) -> Result<(), LampError> {
        self.expect_phase(Phase::AwaitingLamplighterParams)?;
        if psi == 0 || r == 0 {
            return Err(LampError::InvalidParams(format!("psi and r must be positive (got psi={psi}, r={r})")));
        }
        if !self.streetmap.lambda().contains(&v) {
            return Err(LampError::InvalidParams(format!("center {v} is not a lamp")));
        }
        self.area = ball(self.streetmap.lambda().as_ref(), &v, u64::from(r))?;
        let params = GameParams { n: self.n, sigma: self.sigma, rho: self.rho, psi, r, v };
        let e = self
            .event(EventKind::Setup)
            .actor("L")
            .field("step", "lamplighter_params")
            .field("psi", psi)
            .field("r", r)
            .field("v", &params.v)
            .field("area_size", self.area.len());
        self.trace.push(e);
        self.params = Some(params);
        self.phase = Phase::AwaitingCopierBoards;
        Ok(())
    }

    /// The copiers place their initial boards (anywhere on the streetmap).
    pub fn place_copiers(&mut self, boards: Vec<Board>) -> Result<(), LampError> {
        self.expect_phase(Phase::AwaitingCopierBoards)?;
        if boards.len() != self.n {
            return Err(LampError::InvalidBoard {
                index: None,
                detail: format!("expected {} copier boards, got {}", self.n, boards.len()),
            });
        }
        for (i, b) in boards.iter().enumerate() {
            if !self.streetmap.is_valid_board(b) {
                return Err(LampError::InvalidBoard { index: Some(i), detail: format!("{b:?} is not a board") });
            }
        }
        for (i, b) in boards.iter().enumerate() {
            let e = self.event(EventKind::Setup).actor(Actor::Copier(i).code()).field("step", "copier_board").field("board", b);
            self.trace.push(e);
        }
        self.copiers = boards;
        self.phase = Phase::AwaitingLamplighterBoard;
        Ok(())
    }

    /// The lamplighter places its initial board inside the area of play.
    /// Returns the winning copier if the copiers already win.
    pub fn place_lamplighter(&mut self, board: Board) -> Result<Option<usize>, LampError> {
        self.expect_phase(Phase::AwaitingLamplighterBoard)?;
        if !self.streetmap.is_valid_board(&board) {
            return Err(LampError::InvalidBoard { index: None, detail: format!("{board:?} is not a board") });
        }
        if !self.area.contains(&board.p) || board.phi.keys().any(|x| !self.area.contains(x)) {
            return Err(LampError::InvalidBoard {
                index: None,
                detail: format!("{board:?} does not lie within the area of play"),
            });
        }
        let params = self.params.clone().expect("params declared before boards");
        let copier_boards = std::mem::take(&mut self.copiers);
        self.state = Some(GameState {
            params,
            area_of_play: self.area.clone(),
            lamplighter_board: board.clone(),
            copier_moves_used: vec![0; copier_boards.len()],
            copier_boards,
            turn: 1,
            phase: Phase::CopiersToMove,
            lamplighter_moves_used: 0,
        });
        self.phase = Phase::CopiersToMove;
        self.refresh_distances(None);
        let e = self
            .event(EventKind::Setup)
            .actor("L")
            .field("step", "lamplighter_board")
            .field("board", &board)
            .dist(self.dist_min())
            .digest(self.boards_digest().expect("in play"));
        self.trace.push(e);
        Ok(self.settle_win())
    }

    fn refresh_distances(&mut self, only: Option<usize>) {
        let state = self.state.as_ref().expect("in play");
        let cutoff = self.report_cutoff();
        let compute = |b: &Board| {
            self.streetmap
                .board_distance(&state.lamplighter_board, b, cutoff)
                .expect("engine boards belong to the streetmap")
        };
        match only {
            Some(i) => self.distances[i] = compute(&state.copier_boards[i]),
            None => self.distances = state.copier_boards.iter().map(compute).collect(),
        }
    }

    /// Smallest copier index within `rho` of the lamplighter, computed afresh.
    pub fn check_copier_win(&self) -> Option<usize> {
        let state = self.state.as_ref()?;
        state.copier_boards.iter().position(|b| {
            self.streetmap
                .board_distance(&state.lamplighter_board, b, u64::from(self.rho))
                .expect("engine boards belong to the streetmap")
                .is_some()
        })
    }

    fn settle_win(&mut self) -> Option<usize> {
        let rho = u64::from(self.rho);
        let winner = self.distances.iter().position(|d| matches!(d, Some(d) if *d <= rho))?;
        let e = self.event(EventKind::Win).actor(Actor::Copier(winner).code()).dist(self.dist_min());
        self.trace.push(e);
        self.finish_with(Outcome::CopierWin { copier: winner });
        Some(winner)
    }

    fn finish_with(&mut self, outcome: Outcome) {
        self.phase = Phase::Finished;
        if let Some(s) = self.state.as_mut() {
            s.phase = Phase::Finished;
        }
        let mut e = self.event(EventKind::End).field("outcome", outcome.label());
        match &outcome {
            Outcome::Survived => {}
            Outcome::CopierWin { copier } => e = e.field("copier", copier),
            Outcome::Fault { actor, reason } => e = e.field("fault_actor", actor).field("reason", reason),
        }
        if self.state.is_some() {
            e = e.dist(self.dist_min()).digest(self.boards_digest().expect("in play"));
        }
        self.trace.push(e);
        self.outcome = Some(outcome);
    }

    /// Ends an unfinished game at the horizon with the lamplighter surviving.
    pub fn finish(&mut self) {
        if self.outcome.is_none() {
            self.finish_with(Outcome::Survived);
        }
    }

    /// Records a strategy-protocol violation and ends the game.
    pub fn record_fault(&mut self, actor: &str, reason: impl Into<String>) {
        if self.outcome.is_some() {
            return;
        }
        let reason = reason.into();
        let e = self.event(EventKind::Fault).actor(actor).field("reason", &reason);
        self.trace.push(e);
        self.finish_with(Outcome::Fault { actor: actor.to_string(), reason });
    }

    fn speed_left(&self, actor: Actor) -> Result<u32, IllegalMove> {
        let state = self
            .state
            .as_ref()
            .filter(|_| self.phase != Phase::Finished)
            .ok_or_else(|| IllegalMove::new(IllegalReason::WrongPhase, format!("game is {:?}", self.phase)))?;
        match actor {
            Actor::Lamplighter => {
                if self.phase != Phase::LamplighterToMove {
                    return Err(IllegalMove::new(IllegalReason::WrongPhase, "not the lamplighter's turn"));
                }
                Ok(state.params.psi - state.lamplighter_moves_used)
            }
            Actor::Copier(i) => {
                if self.phase != Phase::CopiersToMove {
                    return Err(IllegalMove::new(IllegalReason::WrongPhase, "not the copiers' turn"));
                }
                if i >= self.n {
                    return Err(IllegalMove::new(IllegalReason::WrongPhase, format!("there is no copier {i}")));
                }
                let used = match self.config.budget {
                    CopierBudget::PerCopier => state.copier_moves_used[i],
                    CopierBudget::Shared => state.copier_moves_used.iter().sum(),
                };
                Ok(self.sigma.saturating_sub(used))
            }
        }
    }

    /// Moves left for `actor` in the current turn.
    pub fn moves_remaining(&self, actor: Actor) -> Result<u32, IllegalMove> {
        self.speed_left(actor)
    }

    fn board_of(&self, actor: Actor) -> &Board {
        let s = self.state.as_ref().expect("in play");
        match actor {
            Actor::Lamplighter => &s.lamplighter_board,
            Actor::Copier(i) => &s.copier_boards[i],
        }
    }

    /// Every legal move for `actor`: walks (kept inside the area of play for
    /// the lamplighter) then state changes, in vertex order.
    pub fn legal_moves(&self, actor: Actor) -> Result<Vec<Move>, IllegalMove> {
        if self.speed_left(actor)? == 0 {
            return Err(IllegalMove::new(IllegalReason::SpeedExhausted, format!("{actor} has no moves left")));
        }
        let moves = self.streetmap.single_moves(self.board_of(actor)).expect("engine boards belong to the streetmap");
        Ok(moves
            .into_iter()
            .map(|(m, _)| m)
            .filter(|m| match (actor, m) {
                (Actor::Lamplighter, Move::Walk { to }) => self.area.contains(to),
                _ => true,
            })
            .collect())
    }

    /// Applies one atomic move and immediately checks for a copier win.
    pub fn apply_move(&mut self, actor: Actor, mv: &Move) -> Result<MoveOutcome, IllegalMove> {
        if self.speed_left(actor)? == 0 {
            return Err(IllegalMove::new(IllegalReason::SpeedExhausted, format!("{actor} has no moves left")));
        }
        let current = self.board_of(actor);
        let next = self
            .streetmap
            .apply(current, mv)
            .ok()
            .flatten()
            .ok_or_else(|| IllegalMove::new(IllegalReason::NotAdjacent, format!("{mv:?} from {current:?}")))?;
        if actor == Actor::Lamplighter && !self.area.contains(&next.p) {
            return Err(IllegalMove::new(IllegalReason::OutsideArea, format!("{} is outside the area of play", next.p)));
        }
        let state = self.state.as_mut().expect("in play");
        match actor {
            Actor::Lamplighter => {
                state.lamplighter_board = next.clone();
                state.lamplighter_moves_used += 1;
            }
            Actor::Copier(i) => {
                state.copier_boards[i] = next.clone();
                state.copier_moves_used[i] += 1;
            }
        }
        self.refresh_distances(match actor {
            Actor::Lamplighter => None,
            Actor::Copier(i) => Some(i),
        });
        let turn = self.state.as_ref().map(|s| s.turn).unwrap_or_default();
        let e = self
            .event(EventKind::Move)
            .actor(actor.code())
            .with_move(serde_json::to_value(mv).expect("serializable move"))
            .dist(self.dist_min())
            .digest(self.boards_digest().expect("in play"))
            .field("turn", turn);
        self.trace.push(e);
        let win = self.settle_win();
        Ok(MoveOutcome { board: next, dist_min: self.dist_min(), win })
    }

    /// Debug only: replaces copier `i`'s board outright during the copiers'
    /// turn, without using any of its moves. Recorded as a `teleport` move.
    /// Games that use this are outside the rules and prove nothing.
    pub fn teleport_copier(&mut self, i: usize, board: Board) -> Result<Option<usize>, LampError> {
        self.expect_phase(Phase::CopiersToMove)?;
        if i >= self.n {
            return Err(LampError::InvalidBoard { index: Some(i), detail: format!("there is no copier {i}") });
        }
        self.streetmap.check_board(&board).map_err(|e| LampError::InvalidBoard { index: Some(i), detail: e.to_string() })?;
        let state = self.state.as_mut().expect("in play");
        state.copier_boards[i] = board.clone();
        self.refresh_distances(Some(i));
        let turn = self.state.as_ref().map(|s| s.turn).unwrap_or_default();
        let e = self
            .event(EventKind::Move)
            .actor(Actor::Copier(i).code())
            .with_move(serde_json::json!({ "kind": "teleport", "board": board }))
            .dist(self.dist_min())
            .digest(self.boards_digest().expect("in play"))
            .field("turn", turn);
        self.trace.push(e);
        Ok(self.settle_win())
    }

    /// Ends the current side's turn. After the lamplighter's turn the turn
    /// counter advances.
    pub fn end_turn(&mut self) -> Result<(), IllegalMove> {
        let phase = self.phase;
        let state = match self.state.as_mut() {
            Some(s) if matches!(phase, Phase::CopiersToMove | Phase::LamplighterToMove) => s,
            _ => return Err(IllegalMove::new(IllegalReason::WrongPhase, format!("game is {phase:?}"))),
        };
        let turn = state.turn;
        let mut e = Event::new(self.trace.len() as u64, EventKind::Turn).field("turn", turn);
        if phase == Phase::CopiersToMove {
            e = e.field("side", "copiers").field("moves", &state.copier_moves_used);
            state.copier_moves_used.iter_mut().for_each(|m| *m = 0);
            state.phase = Phase::LamplighterToMove;
        } else {
            e = e.field("side", "lamplighter").field("moves", state.lamplighter_moves_used);
            state.lamplighter_moves_used = 0;
            state.turn += 1;
            state.phase = Phase::CopiersToMove;
        }
        self.phase = state.phase;
        let e = e.dist(self.dist_min()).digest(self.boards_digest().expect("in play"));
        self.trace.push(e);
        Ok(())
    }
}
