//! Weak cops and robbers on lazy graphs.
//!
//! Cops jump to any vertex within distance `sigma` and capture the robber by
//! landing within distance `rho`. The robber moves along a path of length at
//! most `psi` that avoids every cop's `rho`-ball. The robber tries to stay in
//! the ball of radius `R` around `v` forever; the engine reports ball
//! membership per turn and never declares a cop win by exclusion.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ball, GraphError, MetricRef, Path};
use crate::lamp::StrategyError;
use crate::trace::{digest_of, Event, EventKind, GameTrace};
use crate::vertex::VertexId;

mod cops;

pub use cops::{descend, CopSpec, GreedyCops, RandomCops, StationaryCops};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WcrError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("wrong phase: game is {0:?}")]
    WrongPhase(WcrPhase),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WcrParams {
    pub n: usize,
    pub sigma: u32,
    pub rho: u32,
    pub psi: u32,
    #[serde(rename = "R")]
    pub big_r: u64,
    pub v: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WcrPhase {
    AwaitingRobberParams,
    AwaitingCopPositions,
    AwaitingRobberPosition,
    CopsToMove,
    RobberToMove,
    Finished,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WcrState {
    pub params: WcrParams,
    pub cop_positions: Vec<VertexId>,
    pub robber_position: VertexId,
    pub turn: u64,
    pub phase: WcrPhase,
    pub in_ball_history: Vec<bool>,
    pub cops_moved: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WcrOutcome {
    Captured { cop: usize },
    Survived,
    Fault { actor: String, reason: String },
}

impl WcrOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            WcrOutcome::Captured { .. } => "captured",
            WcrOutcome::Survived => "survived",
            WcrOutcome::Fault { .. } => "fault",
        }
    }
}

fn cop_code(i: usize) -> String {
    format!("K{i}")
}

/// Every vertex the robber can reach along a path of length at most `psi`
/// that stays outside the `rho`-balls of all cops.
pub fn robber_legal_targets(
    metric: &MetricRef,
    robber: &VertexId,
    cops: &[VertexId],
    psi: u32,
    rho: u32,
) -> Result<BTreeSet<VertexId>, GraphError> {
    let g = metric.graph();
    let mut forbidden = BTreeSet::new();
    for c in cops {
        forbidden.extend(ball(g, c, u64::from(rho))?);
    }
    let mut seen = BTreeSet::new();
    if forbidden.contains(robber) {
        return Ok(seen);
    }
    seen.insert(robber.clone());
    let mut queue = VecDeque::from([(robber.clone(), 0u32)]);
    while let Some((x, d)) = queue.pop_front() {
        if d == psi {
            continue;
        }
        for y in g.neighbors(&x)? {
            if !forbidden.contains(&y) && seen.insert(y.clone()) {
                queue.push_back((y, d + 1));
            }
        }
    }
    Ok(seen)
}

/// Stepwise engine. Setup order: cops' speed and reach (given to
/// [`WcrGame::new`]), the robber's speed, radius and center, the cops'
/// positions, the robber's position. Turns alternate starting with the cops.
#[derive(Debug)]
pub struct WcrGame {
    metric: MetricRef,
    seed: u64,
    n: usize,
    sigma: u32,
    rho: u32,
    phase: WcrPhase,
    params: Option<WcrParams>,
    cops: Vec<VertexId>,
    state: Option<WcrState>,
    outcome: Option<WcrOutcome>,
    trace: GameTrace,
}

impl WcrGame {
    pub fn new(metric: MetricRef, n: usize, sigma: u32, rho: u32, seed: u64) -> Result<Self, WcrError> {
        if n == 0 || sigma == 0 || rho == 0 {
            return Err(WcrError::InvalidParams(format!(
                "n, sigma and rho must be positive (got n={n}, sigma={sigma}, rho={rho})"
            )));
        }
        let mut g = Self {
            metric,
            seed,
            n,
            sigma,
            rho,
            phase: WcrPhase::AwaitingRobberParams,
            params: None,
            cops: Vec::new(),
            state: None,
            outcome: None,
            trace: GameTrace::default(),
        };
        let family = format!("{:?}", g.metric.graph().family());
        let e = g.event(EventKind::Setup).field("step", "header").field("seed", seed).field("graph", family).field("n", n);
        g.trace.push(e);
        let e = g.event(EventKind::Setup).field("step", "cop_params").field("sigma", sigma).field("rho", rho);
        g.trace.push(e);
        Ok(g)
    }

    fn event(&self, kind: EventKind) -> Event {
        Event::new(self.trace.len() as u64, kind)
    }

    fn expect_phase(&self, phase: WcrPhase) -> Result<(), WcrError> {
        if self.phase == phase {
            Ok(())
        } else {
            Err(WcrError::WrongPhase(self.phase))
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn metric(&self) -> &MetricRef {
        &self.metric
    }

    pub fn phase(&self) -> WcrPhase {
        self.phase
    }

    pub fn params(&self) -> Option<&WcrParams> {
        self.params.as_ref()
    }

    pub fn state(&self) -> Option<&WcrState> {
        self.state.as_ref()
    }

    pub fn outcome(&self) -> Option<&WcrOutcome> {
        self.outcome.as_ref()
    }

    pub fn trace(&self) -> &GameTrace {
        &self.trace
    }

    pub fn into_trace(self) -> GameTrace {
        self.trace
    }

    pub fn report_cutoff(&self) -> u64 {
        u64::from(self.rho) + u64::from(self.sigma) + 2
    }

    fn dist(&self, a: &VertexId, b: &VertexId, cutoff: u64) -> Result<Option<u64>, GraphError> {
        self.metric.distance(a, b, cutoff)
    }

    /// Smallest cop-robber distance up to the report cutoff.
    pub fn min_cop_dist(&self) -> Result<Option<u64>, GraphError> {
        let Some(s) = &self.state else { return Ok(None) };
        let mut best = None;
        for c in &s.cop_positions {
            if let Some(d) = self.dist(c, &s.robber_position, self.report_cutoff())? {
                best = Some(best.map_or(d, |b: u64| b.min(d)));
            }
        }
        Ok(best)
    }

    fn digest(&self) -> String {
        let s = self.state.as_ref().expect("in play");
        digest_of(&(&s.robber_position, &s.cop_positions))
    }

    fn capturing_cop(&self) -> Result<Option<usize>, GraphError> {
        let s = self.state.as_ref().expect("in play");
        for (i, c) in s.cop_positions.iter().enumerate() {
            if self.dist(c, &s.robber_position, u64::from(self.rho))?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn declare_robber_params(&mut self, psi: u32, big_r: u64, v: VertexId) -> Result<(), WcrError> {
        self.expect_phase(WcrPhase::AwaitingRobberParams)?;
        if psi == 0 || big_r == 0 {
            return Err(WcrError::InvalidParams(format!("psi and R must be positive (got psi={psi}, R={big_r})")));
        }
        if !self.metric.graph().contains(&v) {
            return Err(WcrError::InvalidParams(format!("center {v} is not a vertex")));
        }
        let params = WcrParams { n: self.n, sigma: self.sigma, rho: self.rho, psi, big_r, v };
        let e = self
            .event(EventKind::Setup)
            .actor("R")
            .field("step", "robber_params")
            .field("psi", psi)
            .field("R", big_r)
            .field("v", &params.v);
        self.trace.push(e);
        self.params = Some(params);
        self.phase = WcrPhase::AwaitingCopPositions;
        Ok(())
    }

    pub fn place_cops(&mut self, positions: Vec<VertexId>) -> Result<(), WcrError> {
        self.expect_phase(WcrPhase::AwaitingCopPositions)?;
        if positions.len() != self.n {
            return Err(WcrError::InvalidParams(format!("expected {} cops, got {}", self.n, positions.len())));
        }
        if let Some(bad) = positions.iter().find(|x| !self.metric.graph().contains(x)) {
            return Err(WcrError::IllegalMove(format!("{bad} is not a vertex")));
        }
        for (i, x) in positions.iter().enumerate() {
            let e = self.event(EventKind::Setup).actor(cop_code(i)).field("step", "cop_position").field("position", x);
            self.trace.push(e);
        }
        self.cops = positions;
        self.phase = WcrPhase::AwaitingRobberPosition;
        Ok(())
    }

    /// Places the robber; a position inside some cop's `rho`-ball is an
    /// immediate capture. Returns the capturing cop.
    pub fn place_robber(&mut self, position: VertexId) -> Result<Option<usize>, WcrError> {
        self.expect_phase(WcrPhase::AwaitingRobberPosition)?;
        if !self.metric.graph().contains(&position) {
            return Err(WcrError::IllegalMove(format!("{position} is not a vertex")));
        }
        let params = self.params.clone().expect("params declared");
        self.state = Some(WcrState {
            params,
            cop_positions: std::mem::take(&mut self.cops),
            robber_position: position.clone(),
            turn: 1,
            phase: WcrPhase::CopsToMove,
            in_ball_history: Vec::new(),
            cops_moved: vec![false; self.n],
        });
        self.phase = WcrPhase::CopsToMove;
        let e = self
            .event(EventKind::Setup)
            .actor("R")
            .field("step", "robber_position")
            .field("position", &position)
            .dist(self.min_cop_dist()?)
            .digest(self.digest());
        self.trace.push(e);
        self.settle_capture()
    }

    fn settle_capture(&mut self) -> Result<Option<usize>, WcrError> {
        let Some(cop) = self.capturing_cop()? else { return Ok(None) };
        let e = self.event(EventKind::Capture).actor(cop_code(cop)).dist(self.min_cop_dist()?);
        self.trace.push(e);
        self.finish_with(WcrOutcome::Captured { cop })?;
        Ok(Some(cop))
    }

    fn finish_with(&mut self, outcome: WcrOutcome) -> Result<(), WcrError> {
        self.phase = WcrPhase::Finished;
        let mut e = self.event(EventKind::End).field("outcome", outcome.label());
        match &outcome {
            WcrOutcome::Captured { cop } => e = e.field("cop", cop),
            WcrOutcome::Survived => {}
            WcrOutcome::Fault { actor, reason } => e = e.field("fault_actor", actor).field("reason", reason),
        }
        if self.state.is_some() {
            e = e.dist(self.min_cop_dist()?).digest(self.digest());
        }
        if let Some(s) = self.state.as_mut() {
            s.phase = WcrPhase::Finished;
        }
        self.trace.push(e);
        self.outcome = Some(outcome);
        Ok(())
    }

    pub fn finish(&mut self) -> Result<(), WcrError> {
        if self.outcome.is_none() {
            self.finish_with(WcrOutcome::Survived)?;
        }
        Ok(())
    }

    pub fn record_fault(&mut self, actor: &str, reason: impl Into<String>) -> Result<(), WcrError> {
        if self.outcome.is_some() {
            return Ok(());
        }
        let reason = reason.into();
        let e = self.event(EventKind::Fault).actor(actor).field("reason", &reason);
        self.trace.push(e);
        self.finish_with(WcrOutcome::Fault { actor: actor.to_string(), reason })
    }

    /// Cop `i` jumps to `target` (within distance `sigma`). Capture is
    /// checked right after the jump.
    pub fn cop_move(&mut self, i: usize, target: VertexId) -> Result<Option<usize>, WcrError> {
        self.expect_phase(WcrPhase::CopsToMove)?;
        let s = self.state.as_ref().expect("in play");
        if i >= self.n {
            return Err(WcrError::IllegalMove(format!("there is no cop {i}")));
        }
        if s.cops_moved[i] {
            return Err(WcrError::IllegalMove(format!("cop {i} already moved this turn")));
        }
        if !self.metric.graph().contains(&target) {
            return Err(WcrError::IllegalMove(format!("{target} is not a vertex")));
        }
        let Some(d) = self.dist(&s.cop_positions[i], &target, u64::from(self.sigma))? else {
            return Err(WcrError::IllegalMove(format!("{target} is further than {} from cop {i}", self.sigma)));
        };
        let s = self.state.as_mut().expect("in play");
        s.cop_positions[i] = target.clone();
        s.cops_moved[i] = true;
        let turn = s.turn;
        let e = self
            .event(EventKind::Move)
            .actor(cop_code(i))
            .with_move(serde_json::json!({"kind": "jump", "to": target, "length": d}))
            .dist(self.min_cop_dist()?)
            .digest(self.digest())
            .field("turn", turn);
        self.trace.push(e);
        self.settle_capture()
    }

    pub fn end_cops_turn(&mut self) -> Result<(), WcrError> {
        self.expect_phase(WcrPhase::CopsToMove)?;
        let s = self.state.as_mut().expect("in play");
        s.cops_moved.iter_mut().for_each(|m| *m = false);
        s.phase = WcrPhase::RobberToMove;
        self.phase = WcrPhase::RobberToMove;
        Ok(())
    }

    /// Moves the robber along `path`, which must start at its position, have
    /// at most `psi` edges and avoid the `rho`-ball of every cop.
    pub fn robber_move(&mut self, path: &Path) -> Result<(), WcrError> {
        self.expect_phase(WcrPhase::RobberToMove)?;
        let s = self.state.as_ref().expect("in play");
        if path.vertices.first() != Some(&s.robber_position) {
            return Err(WcrError::IllegalMove("path does not start at the robber".into()));
        }
        if path.length() > s.params.psi as usize {
            return Err(WcrError::IllegalMove(format!("path of length {} exceeds speed {}", path.length(), s.params.psi)));
        }
        if !path.is_walk_in(self.metric.graph()) {
            return Err(WcrError::IllegalMove("consecutive path vertices are not adjacent".into()));
        }
        for x in &path.vertices {
            for (i, c) in s.cop_positions.iter().enumerate() {
                if self.dist(c, x, u64::from(self.rho))?.is_some() {
                    return Err(WcrError::IllegalMove(format!("path enters the reach of cop {i} at {x}")));
                }
            }
        }
        let to = path.vertices.last().expect("non-empty path").clone();
        let turn = s.turn;
        self.state.as_mut().expect("in play").robber_position = to.clone();
        let e = self
            .event(EventKind::Move)
            .actor("R")
            .with_move(serde_json::json!({"kind": "path", "to": to, "length": path.length()}))
            .dist(self.min_cop_dist()?)
            .digest(self.digest())
            .field("turn", turn);
        self.trace.push(e);
        Ok(())
    }

    /// Ends the robber's turn and records whether it is inside its ball.
    pub fn end_robber_turn(&mut self) -> Result<bool, WcrError> {
        self.expect_phase(WcrPhase::RobberToMove)?;
        let s = self.state.as_ref().expect("in play");
        let in_ball = self.dist(&s.params.v, &s.robber_position, s.params.big_r)?.is_some();
        let min = self.min_cop_dist()?;
        let turn = s.turn;
        let e = self
            .event(EventKind::Turn)
            .field("turn", turn)
            .field("in_ball", in_ball)
            .field("min_cop_dist", min)
            .dist(min)
            .digest(self.digest());
        self.trace.push(e);
        let s = self.state.as_mut().expect("in play");
        s.in_ball_history.push(in_ball);
        s.turn += 1;
        s.phase = WcrPhase::CopsToMove;
        self.phase = WcrPhase::CopsToMove;
        Ok(in_ball)
    }
}

/// Controls all cops.
pub trait CopStrategy: Send {
    fn name(&self) -> String;

    fn initial_positions(&mut self, metric: &MetricRef, params: &WcrParams) -> Result<Vec<VertexId>, StrategyError>;

    /// Jump targets for cops `0..n`, applied in index order.
    fn play_turn(&mut self, metric: &MetricRef, state: &WcrState) -> Result<Vec<VertexId>, StrategyError>;
}

pub trait RobberStrategy: Send {
    fn name(&self) -> String;

    /// Speed `psi`, radius `R` and center `v`.
    fn choose_params(
        &mut self,
        metric: &MetricRef,
        n: usize,
        sigma: u32,
        rho: u32,
    ) -> Result<(u32, u64, VertexId), StrategyError>;

    fn initial_position(&mut self, metric: &MetricRef, params: &WcrParams, cops: &[VertexId]) -> Result<VertexId, StrategyError>;

    /// A path starting at the robber's position.
    fn play_turn(&mut self, metric: &MetricRef, state: &WcrState) -> Result<Path, StrategyError>;
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WcrSetup {
    pub n: usize,
    pub sigma: u32,
    pub rho: u32,
    pub horizon: u64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct WcrResult {
    pub outcome: WcrOutcome,
    pub trace: GameTrace,
    pub rounds_completed: u64,
    pub in_ball_history: Vec<bool>,
    pub min_cop_dist: Option<u64>,
    pub max_robber_path: usize,
    pub params: Option<WcrParams>,
}

/// Runs a full game up to `horizon` rounds, until capture, or until a
/// strategy faults.
pub fn run_wcr(
    metric: MetricRef,
    setup: &WcrSetup,
    cops: &mut dyn CopStrategy,
    robber: &mut dyn RobberStrategy,
) -> Result<WcrResult, WcrError> {
    let mut g = WcrGame::new(metric.clone(), setup.n, setup.sigma, setup.rho, setup.seed)?;
    let mut rounds = 0;
    'game: {
        let (psi, big_r, v) = match robber.choose_params(&metric, setup.n, setup.sigma, setup.rho) {
            Ok(x) => x,
            Err(e) => {
                g.record_fault("R", e.0)?;
                break 'game;
            }
        };
        if let Err(e) = g.declare_robber_params(psi, big_r, v) {
            g.record_fault("R", e.to_string())?;
            break 'game;
        }
        let params = g.params().expect("declared").clone();
        let positions = match cops.initial_positions(&metric, &params) {
            Ok(p) => p,
            Err(e) => {
                g.record_fault("K0", e.0)?;
                break 'game;
            }
        };
        if let Err(e) = g.place_cops(positions.clone()) {
            g.record_fault("K0", e.to_string())?;
            break 'game;
        }
        let start = match robber.initial_position(&metric, &params, &positions) {
            Ok(x) => x,
            Err(e) => {
                g.record_fault("R", e.0)?;
                break 'game;
            }
        };
        match g.place_robber(start) {
            Err(e) => {
                g.record_fault("R", e.to_string())?;
                break 'game;
            }
            Ok(Some(_)) => break 'game,
            Ok(None) => {}
        }
        while rounds < setup.horizon {
            let state = g.state().expect("in play").clone();
            let targets = match cops.play_turn(&metric, &state) {
                Ok(t) => t,
                Err(e) => {
                    g.record_fault("K0", e.0)?;
                    break 'game;
                }
            };
            if targets.len() != setup.n {
                g.record_fault("K0", format!("{} targets for {} cops", targets.len(), setup.n))?;
                break 'game;
            }
            for (i, t) in targets.into_iter().enumerate() {
                match g.cop_move(i, t) {
                    Ok(Some(_)) => break 'game,
                    Ok(None) => {}
                    Err(e) => {
                        g.record_fault(&cop_code(i), e.to_string())?;
                        break 'game;
                    }
                }
            }
            g.end_cops_turn()?;
            let state = g.state().expect("in play").clone();
            let path = match robber.play_turn(&metric, &state) {
                Ok(p) => p,
                Err(e) => {
                    g.record_fault("R", e.0)?;
                    break 'game;
                }
            };
            if let Err(e) = g.robber_move(&path) {
                g.record_fault("R", e.to_string())?;
                break 'game;
            }
            g.end_robber_turn()?;
            rounds += 1;
        }
    }
    g.finish()?;
    let outcome = g.outcome().cloned().expect("finished");
    let in_ball_history = g.state().map(|s| s.in_ball_history.clone()).unwrap_or_default();
    let params = g.params().cloned();
    let trace = g.into_trace();
    let min_cop_dist = trace.events.iter().filter_map(|e| e.dist_min.flatten()).min();
    let max_robber_path = trace
        .events
        .iter()
        .filter(|e| e.ev == EventKind::Move && e.actor.as_deref() == Some("R"))
        .filter_map(|e| e.mv.as_ref()?.get("length")?.as_u64())
        .max()
        .unwrap_or(0) as usize;
    Ok(WcrResult { outcome, trace, rounds_completed: rounds, in_ball_history, min_cop_dist, max_robber_path, params })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::{BfsMetric, InfinitePath};

    fn i(x: i64) -> VertexId {
        VertexId::Int(x)
    }

    fn line() -> MetricRef {
        Arc::new(BfsMetric(Arc::new(InfinitePath)))
    }

    fn ints(xs: impl IntoIterator<Item = i64>) -> BTreeSet<VertexId> {
        xs.into_iter().map(i).collect()
    }

    #[test]
    fn legal_targets_examples() {
        let m = line();
        assert_eq!(robber_legal_targets(&m, &i(0), &[], 2, 1).unwrap(), ints(-2..=2));
        assert_eq!(robber_legal_targets(&m, &i(0), &[i(3)], 5, 1).unwrap(), ints(-5..=1));
        assert!(robber_legal_targets(&m, &i(0), &[i(1)], 5, 1).unwrap().is_empty());
    }

    fn started(cops: Vec<i64>, robber: i64) -> WcrGame {
        let mut g = WcrGame::new(line(), cops.len(), 2, 1, 0).unwrap();
        g.declare_robber_params(3, 10, i(0)).unwrap();
        g.place_cops(cops.into_iter().map(i).collect()).unwrap();
        assert_eq!(g.place_robber(i(robber)).unwrap(), None);
        g
    }

    #[test]
    fn cop_jumps_within_speed() {
        for target in -2..=2 {
            let mut g = started(vec![0], 20);
            assert_eq!(g.cop_move(0, i(target)).unwrap(), None);
        }
        let mut g = started(vec![0], 20);
        assert!(matches!(g.cop_move(0, i(3)), Err(WcrError::IllegalMove(_))));
    }

    #[test]
    fn capture_after_jump() {
        let mut g = started(vec![0], 3);
        assert_eq!(g.cop_move(0, i(2)).unwrap(), Some(0));
        assert_eq!(g.outcome(), Some(&WcrOutcome::Captured { cop: 0 }));
    }

    #[test]
    fn robber_inside_reach_is_captured_at_setup() {
        let mut g = WcrGame::new(line(), 1, 2, 1, 0).unwrap();
        g.declare_robber_params(3, 10, i(0)).unwrap();
        g.place_cops(vec![i(0)]).unwrap();
        assert_eq!(g.place_robber(i(1)).unwrap(), Some(0));
    }

    #[test]
    fn robber_paths_are_checked() {
        let mut g = started(vec![10], 0);
        g.cop_move(0, i(8)).unwrap();
        g.end_cops_turn().unwrap();
        let too_long = Path { vertices: (0..=4).map(i).collect() };
        assert!(g.robber_move(&too_long).is_err());
        let into_reach = Path { vertices: vec![i(0), i(1), i(2), i(3)] };
        assert!(g.robber_move(&Path { vertices: vec![i(0), i(2)] }).is_err());
        assert!(g.robber_move(&into_reach).is_ok());
        assert!(g.end_robber_turn().unwrap());
        // standing still is a path of length zero
        g.cop_move(0, i(10)).unwrap();
        g.end_cops_turn().unwrap();
        assert!(g.robber_move(&Path { vertices: vec![i(3)] }).is_ok());
    }

    /// Starts far from the center and never moves.
    struct StayPut;

    impl RobberStrategy for StayPut {
        fn name(&self) -> String {
            "stay".into()
        }

        fn choose_params(&mut self, _: &MetricRef, _: usize, _: u32, _: u32) -> Result<(u32, u64, VertexId), StrategyError> {
            Ok((1, 5, i(0)))
        }

        fn initial_position(&mut self, _: &MetricRef, _: &WcrParams, _: &[VertexId]) -> Result<VertexId, StrategyError> {
            Ok(i(1000))
        }

        fn play_turn(&mut self, _: &MetricRef, state: &WcrState) -> Result<Path, StrategyError> {
            Ok(Path { vertices: vec![state.robber_position.clone()] })
        }
    }

    #[test]
    fn stay_put_robber_leaves_the_ball() {
        let mut cops = StationaryCops::new(1);
        let setup = WcrSetup { n: 1, sigma: 1, rho: 1, horizon: 3, seed: 3 };
        let r = run_wcr(line(), &setup, &mut cops, &mut StayPut).unwrap();
        assert_eq!(r.outcome, WcrOutcome::Survived);
        assert_eq!(r.in_ball_history, vec![false; 3]);
    }

    #[test]
    fn horizon_zero_is_setup_only() {
        let mut cops = StationaryCops::new(1);
        let mut robber = StayPut;
        let r = run_wcr(line(), &WcrSetup { n: 1, sigma: 1, rho: 1, horizon: 0, seed: 3 }, &mut cops, &mut robber).unwrap();
        assert_eq!(r.outcome, WcrOutcome::Survived);
        assert!(r.trace.events.iter().all(|e| matches!(e.ev, EventKind::Setup | EventKind::End)));
    }
}
