use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Actor, Board, GameConfig, GameParams, GameState, LampError, LampGame, Move, Outcome, Streetmap};
use crate::trace::{Event, EventKind, GameTrace};
use crate::vertex::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct StrategyError(pub String);

/// A copier. Each copier sees the full game state (perfect information).
pub trait CopierStrategy: Send {
    fn name(&self) -> String;

    fn initial_board(
        &mut self,
        streetmap: &Streetmap,
        params: &GameParams,
        area: &BTreeSet<VertexId>,
        index: usize,
    ) -> Result<Board, StrategyError>;

    /// Up to `budget` atomic moves for copier `index`, applied in order.
    fn play_turn(
        &mut self,
        streetmap: &Streetmap,
        state: &GameState,
        index: usize,
        budget: u32,
    ) -> Result<Vec<Move>, StrategyError>;
}

pub trait LamplighterStrategy: Send {
    fn name(&self) -> String;

    /// Speed `psi`, radius `r` and center `v`, knowing the copiers' choices.
    fn choose_params(
        &mut self,
        streetmap: &Streetmap,
        n: usize,
        sigma: u32,
        rho: u32,
    ) -> Result<(u32, u32, VertexId), StrategyError>;

    fn initial_board(
        &mut self,
        streetmap: &Streetmap,
        params: &GameParams,
        copier_boards: &[Board],
    ) -> Result<Board, StrategyError>;

    fn play_turn(&mut self, streetmap: &Streetmap, state: &GameState) -> Result<Vec<Move>, StrategyError>;
}

/// Sees every trace event right after the engine emits it, together with
/// the engine state at that moment.
pub trait GameObserver {
    fn observe(&mut self, game: &LampGame, event: &Event);
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSetup {
    pub n: usize,
    pub sigma: u32,
    pub rho: u32,
    /// Number of rounds (a copiers' turn followed by a lamplighter turn).
    pub horizon: u64,
    #[serde(default)]
    pub config: GameConfig,
}

#[derive(Debug, Clone)]
pub struct GameResult {
    pub outcome: Outcome,
    pub trace: GameTrace,
    pub rounds_completed: u64,
    /// Smallest copier distance recorded in the trace; `None` if none was
    /// within the report cutoff.
    pub min_dist: Option<u64>,
    pub report_cutoff: u64,
    pub max_lamplighter_moves: u32,
    pub max_copier_moves: u32,
    pub params: Option<GameParams>,
}

struct Driver<'a, 'o> {
    game: LampGame,
    seen: usize,
    observers: &'a mut [&'o mut dyn GameObserver],
}

impl Driver<'_, '_> {
    fn flush(&mut self) {
        while self.seen < self.game.trace().len() {
            let e = self.game.trace().events[self.seen].clone();
            for o in self.observers.iter_mut() {
                o.observe(&self.game, &e);
            }
            self.seen += 1;
        }
    }

    fn fault(&mut self, actor: &str, reason: impl Into<String>) {
        self.game.record_fault(actor, reason);
        self.flush();
    }

    fn finished(&self) -> bool {
        self.game.outcome().is_some()
    }

    /// Applies moves in order; a rejected move is a fault of `actor`.
    fn play(&mut self, actor: Actor, moves: &[Move]) {
        for mv in moves {
            if self.finished() {
                return;
            }
            let res = self.game.apply_move(actor, mv);
            self.flush();
            if let Err(e) = res {
                self.fault(&actor.code(), format!("illegal move {mv:?}: {e}"));
                return;
            }
        }
    }
}

/// Runs a full game: setup in the fixed order, then up to `horizon` rounds
/// or until the copiers win or a strategy faults.
pub fn run_lamplighter_game(
    streetmap: Arc<Streetmap>,
    setup: &RunSetup,
    copiers: &mut [Box<dyn CopierStrategy>],
    lamplighter: &mut dyn LamplighterStrategy,
    observers: &mut [&mut dyn GameObserver],
) -> Result<GameResult, LampError> {
    if copiers.len() != setup.n {
        return Err(LampError::InvalidParams(format!(
            "{} copier strategies for {} copiers",
            copiers.len(),
            setup.n
        )));
    }
    let game = LampGame::new(streetmap.clone(), setup.n, setup.sigma, setup.rho, setup.config.clone())?;
    let mut d = Driver { game, seen: 0, observers };
    d.flush();
    let mut rounds = 0;
    'game: {
        let (psi, r, v) = match lamplighter.choose_params(&streetmap, setup.n, setup.sigma, setup.rho) {
            Ok(x) => x,
            Err(e) => {
                d.fault("L", e.0);
                break 'game;
            }
        };
        if let Err(e) = d.game.declare_lamplighter_params(psi, r, v) {
            d.fault("L", e.to_string());
            break 'game;
        }
        d.flush();
        let params = d.game.params().expect("declared").clone();
        let area = d.game.area_of_play().clone();
        let mut boards = Vec::with_capacity(setup.n);
        for (i, c) in copiers.iter_mut().enumerate() {
            match c.initial_board(&streetmap, &params, &area, i) {
                Ok(b) => boards.push(b),
                Err(e) => {
                    d.fault(&Actor::Copier(i).code(), e.0);
                    break 'game;
                }
            }
        }
        if let Err(e) = d.game.place_copiers(boards) {
            let actor = match &e {
                LampError::InvalidBoard { index: Some(i), .. } => Actor::Copier(*i).code(),
                _ => "C0".to_string(),
            };
            d.fault(&actor, e.to_string());
            break 'game;
        }
        d.flush();
        let board = match lamplighter.initial_board(&streetmap, &params, d.game.copier_boards()) {
            Ok(b) => b,
            Err(e) => {
                d.fault("L", e.0);
                break 'game;
            }
        };
        let placed = d.game.place_lamplighter(board);
        d.flush();
        match placed {
            Err(e) => {
                d.fault("L", e.to_string());
                break 'game;
            }
            Ok(Some(_)) => break 'game,
            Ok(None) => {}
        }
        while rounds < setup.horizon {
            for i in 0..setup.n {
                let budget = d.game.moves_remaining(Actor::Copier(i)).unwrap_or(0);
                let state = d.game.state().expect("in play");
                let moves = match copiers[i].play_turn(&streetmap, state, i, budget) {
                    Ok(m) => m,
                    Err(e) => {
                        d.fault(&Actor::Copier(i).code(), e.0);
                        break 'game;
                    }
                };
                d.play(Actor::Copier(i), &moves);
                if d.finished() {
                    break 'game;
                }
            }
            d.game.end_turn().expect("copiers' turn");
            d.flush();
            let state = d.game.state().expect("in play");
            let moves = match lamplighter.play_turn(&streetmap, state) {
                Ok(m) => m,
                Err(e) => {
                    d.fault("L", e.0);
                    break 'game;
                }
            };
            d.play(Actor::Lamplighter, &moves);
            if d.finished() {
                break 'game;
            }
            d.game.end_turn().expect("lamplighter's turn");
            d.flush();
            rounds += 1;
        }
    }
    d.game.finish();
    d.flush();
    let outcome = d.game.outcome().cloned().expect("finished");
    let report_cutoff = d.game.report_cutoff();
    let params = d.game.params().cloned();
    let trace = d.game.into_trace();
    let (max_lamplighter_moves, max_copier_moves) = turn_maxima(&trace);
    let min_dist = trace.events.iter().filter_map(|e| e.dist_min.flatten()).min();
    Ok(GameResult {
        outcome,
        trace,
        rounds_completed: rounds,
        min_dist,
        report_cutoff,
        max_lamplighter_moves,
        max_copier_moves,
        params,
    })
}

fn turn_maxima(trace: &GameTrace) -> (u32, u32) {
    let mut lamplighter = 0;
    let mut copier = 0;
    for e in trace.events.iter().filter(|e| e.ev == EventKind::Turn) {
        match (e.get("side").and_then(|s| s.as_str()), e.get("moves")) {
            (Some("lamplighter"), Some(m)) => lamplighter = lamplighter.max(m.as_u64().unwrap_or(0) as u32),
            (Some("copiers"), Some(serde_json::Value::Array(ms))) => {
                for m in ms {
                    copier = copier.max(m.as_u64().unwrap_or(0) as u32);
                }
            }
            _ => {}
        }
    }
    (lamplighter, copier)
}
