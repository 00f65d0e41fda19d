//! The Lamplighter game: streetmaps, boards, the rules engine and a runner
//! for complete games between pluggable strategies.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::GraphError;

mod game;
mod runner;
mod streetmap;

pub use game::{CopierBudget, GameConfig, GameParams, GameState, LampGame, MoveOutcome, Outcome, Phase, Snapshot};
pub use runner::{
    run_lamplighter_game, CopierStrategy, GameObserver, GameResult, LamplighterStrategy, RunSetup, StrategyError,
};
pub use streetmap::{Board, Move, Streetmap, StreetmapSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Actor {
    Lamplighter,
    Copier(usize),
}

impl Actor {
    /// Trace code: `L`, `C0`, `C1`, ...
    pub fn code(&self) -> String {
        match self {
            Actor::Lamplighter => "L".into(),
            Actor::Copier(i) => format!("C{i}"),
        }
    }
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IllegalReason {
    NotAdjacent,
    OutsideArea,
    WrongPhase,
    SpeedExhausted,
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IllegalReason::NotAdjacent => "not-adjacent",
            IllegalReason::OutsideArea => "outside-area",
            IllegalReason::WrongPhase => "wrong-phase",
            IllegalReason::SpeedExhausted => "speed-exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{reason}: {detail}")]
pub struct IllegalMove {
    pub reason: IllegalReason,
    pub detail: String,
}

impl IllegalMove {
    pub fn new(reason: IllegalReason, detail: impl Into<String>) -> Self {
        Self { reason, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LampError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("streetmap mismatch: {0}")]
    StreetmapMismatch(String),
    #[error("wrong phase: expected {expected:?}, game is in {actual:?}")]
    WrongPhase { expected: Phase, actual: Phase },
    #[error("invalid board{}: {detail}", index.map(|i| format!(" for copier {i}")).unwrap_or_default())]
    InvalidBoard { index: Option<usize>, detail: String },
    #[error(transparent)]
    Illegal(#[from] IllegalMove),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
