use std::collections::BTreeSet;

use serde::Serialize;

use super::{disagreement_failures, StrategyPlan};
use crate::lamp::{GameObserver, LampGame};
use crate::trace::{Event, EventKind};
use crate::vertex::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub t: u64,
    pub invariant: &'static str,
    pub detail: String,
}

/// Checks the strategy's invariants at every trace event:
///
/// * `position_on_path`, `states`: the lamplighter stands on the path and
///   only lamps of the path are lit, only with `omega1`;
/// * `center_distance`: the lamplighter's board is within `6r + 1` of the
///   center board;
/// * `speed`: at most `psi` moves per lamplighter turn;
/// * `disagreement`: after setup and after each lamplighter turn, every
///   copier differs from the lamplighter at both of its lamps;
/// * `safety_margin`: after each copiers' turn, every copier is at least
///   `rho + 2` away;
/// * `evasion`: no copier is ever within `rho`.
#[derive(Debug)]
pub struct InvariantMonitor {
    plan: StrategyPlan,
    lamps: BTreeSet<VertexId>,
    pub violations: Vec<Violation>,
    pub events_checked: u64,
}

impl InvariantMonitor {
    pub fn new(plan: StrategyPlan) -> Self {
        let lamps = plan.lamps();
        Self { plan, lamps, violations: Vec::new(), events_checked: 0 }
    }

    pub fn plan(&self) -> &StrategyPlan {
        &self.plan
    }

    fn flag(&mut self, t: u64, invariant: &'static str, detail: String) {
        self.violations.push(Violation { t, invariant, detail });
    }
}

impl GameObserver for InvariantMonitor {
    fn observe(&mut self, game: &LampGame, event: &Event) {
        let Some(state) = game.state() else { return };
        self.events_checked += 1;
        let m = game.streetmap().as_ref();
        let t = event.t;
        let l = &state.lamplighter_board;
        if !self.lamps.contains(&l.p) {
            self.flag(t, "position_on_path", format!("lamplighter at {}", l.p));
        }
        if let Some((x, s)) = l.phi.iter().find(|(x, s)| !self.lamps.contains(*x) || **s != self.plan.omega1) {
            self.flag(t, "states", format!("lamp {x} in state {s}"));
        }
        let bound = 6 * u64::from(self.plan.r) + 1;
        match m.board_distance(&self.plan.center_board(m), l, bound) {
            Ok(Some(_)) => {}
            Ok(None) => self.flag(t, "center_distance", format!("{l:?} is further than {bound} from the center")),
            Err(e) => self.flag(t, "center_distance", e.to_string()),
        }
        if let Some(d) = event.dist_min.flatten() {
            if d <= u64::from(self.plan.rho) {
                self.flag(t, "evasion", format!("a copier is at distance {d}"));
            }
        }
        let side = event.get("side").and_then(|s| s.as_str());
        let after_setup = event.ev == EventKind::Setup && event.get("step").and_then(|s| s.as_str()) == Some("lamplighter_board");
        let after_lamplighter = event.ev == EventKind::Turn && side == Some("lamplighter");
        if after_lamplighter {
            let used = event.get("moves").and_then(|m| m.as_u64()).unwrap_or(0);
            if used > u64::from(self.plan.psi) {
                self.flag(t, "speed", format!("{used} moves with speed {}", self.plan.psi));
            }
        }
        if after_setup || after_lamplighter {
            let failures = disagreement_failures(&self.plan, m, l, &state.copier_boards);
            if !failures.is_empty() {
                self.flag(t, "disagreement", format!("copiers {failures:?} agree at a marked lamp"));
            }
        }
        if event.ev == EventKind::Turn && side == Some("copiers") {
            let margin = u64::from(self.plan.rho) + 1;
            for (i, c) in state.copier_boards.iter().enumerate() {
                if let Ok(Some(d)) = m.board_distance(l, c, margin) {
                    self.flag(t, "safety_margin", format!("copier {i} at distance {d}"));
                }
            }
        }
    }
}
