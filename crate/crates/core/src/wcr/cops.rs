use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CopStrategy, WcrParams, WcrState};
use crate::graph::{GraphError, MetricRef};
use crate::lamp::StrategyError;
use crate::vertex::VertexId;

const CHASE_CUTOFF: u64 = 1 << 16;

fn strategy_err(e: GraphError) -> StrategyError {
    StrategyError(e.to_string())
}

/// Up to `steps` moves from `from` along a shortest path toward `to`,
/// picking the smallest neighbor that gets one closer.
pub fn descend(metric: &MetricRef, from: &VertexId, to: &VertexId, steps: u32) -> Result<VertexId, GraphError> {
    let g = metric.graph();
    let mut cur = from.clone();
    for _ in 0..steps {
        let Some(d) = metric.distance(&cur, to, CHASE_CUTOFF)? else { break };
        if d == 0 {
            break;
        }
        let mut next = None;
        for y in g.neighbors(&cur)? {
            if metric.distance(&y, to, d - 1)? == Some(d - 1) {
                next = Some(y);
                break;
            }
        }
        cur = next.expect("a neighbor one step closer exists");
    }
    Ok(cur)
}

fn random_walk(metric: &MetricRef, from: &VertexId, steps: u64, rng: &mut ChaCha8Rng) -> Result<VertexId, GraphError> {
    let mut cur = from.clone();
    for _ in 0..steps {
        let nbrs = metric.graph().neighbors(&cur)?;
        match nbrs.choose(rng) {
            Some(y) => cur = y.clone(),
            None => break,
        }
    }
    Ok(cur)
}

/// Cops start at the end of random walks from the center, of length at most
/// half the robber's radius (and at most 64).
fn scattered(metric: &MetricRef, params: &WcrParams, rng: &mut ChaCha8Rng) -> Result<Vec<VertexId>, StrategyError> {
    let spread = (params.big_r / 2).min(64);
    (0..params.n)
        .map(|_| {
            let len = rng.gen_range(0..=spread);
            random_walk(metric, &params.v, len, rng).map_err(strategy_err)
        })
        .collect()
}

#[derive(Debug)]
pub struct StationaryCops {
    rng: ChaCha8Rng,
}

impl StationaryCops {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl CopStrategy for StationaryCops {
    fn name(&self) -> String {
        "stationary".into()
    }

    fn initial_positions(&mut self, metric: &MetricRef, params: &WcrParams) -> Result<Vec<VertexId>, StrategyError> {
        scattered(metric, params, &mut self.rng)
    }

    fn play_turn(&mut self, _: &MetricRef, state: &WcrState) -> Result<Vec<VertexId>, StrategyError> {
        Ok(state.cop_positions.clone())
    }
}

/// Every cop spends its whole speed walking a shortest path toward the robber.
#[derive(Debug)]
pub struct GreedyCops {
    rng: ChaCha8Rng,
}

impl GreedyCops {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl CopStrategy for GreedyCops {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn initial_positions(&mut self, metric: &MetricRef, params: &WcrParams) -> Result<Vec<VertexId>, StrategyError> {
        scattered(metric, params, &mut self.rng)
    }

    fn play_turn(&mut self, metric: &MetricRef, state: &WcrState) -> Result<Vec<VertexId>, StrategyError> {
        state
            .cop_positions
            .iter()
            .map(|c| descend(metric, c, &state.robber_position, state.params.sigma).map_err(strategy_err))
            .collect()
    }
}

/// Every cop jumps to the end of a random walk of length `sigma`.
#[derive(Debug)]
pub struct RandomCops {
    rng: ChaCha8Rng,
}

impl RandomCops {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl CopStrategy for RandomCops {
    fn name(&self) -> String {
        "random".into()
    }

    fn initial_positions(&mut self, metric: &MetricRef, params: &WcrParams) -> Result<Vec<VertexId>, StrategyError> {
        scattered(metric, params, &mut self.rng)
    }

    fn play_turn(&mut self, metric: &MetricRef, state: &WcrState) -> Result<Vec<VertexId>, StrategyError> {
        let sigma = u64::from(state.params.sigma);
        state
            .cop_positions
            .iter()
            .map(|c| random_walk(metric, c, sigma, &mut self.rng).map_err(strategy_err))
            .collect()
    }
}

/// Cop strategies selectable from a run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CopSpec {
    Stationary,
    Random {
        #[serde(default)]
        seed: u64,
    },
    Greedy,
}

impl CopSpec {
    pub fn label(&self) -> String {
        match self {
            CopSpec::Stationary => "stationary".into(),
            CopSpec::Random { seed } => format!("random{seed}"),
            CopSpec::Greedy => "greedy".into(),
        }
    }

    pub fn build(&self, game_seed: u64) -> Box<dyn CopStrategy> {
        match self {
            CopSpec::Stationary => Box::new(StationaryCops::new(game_seed)),
            CopSpec::Random { seed } => Box::new(RandomCops::new(game_seed ^ seed.rotate_left(29))),
            CopSpec::Greedy => Box::new(GreedyCops::new(game_seed)),
        }
    }
}
