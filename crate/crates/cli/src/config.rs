use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use wreathgame_core::lamp::{CopierBudget, Streetmap, StreetmapSpec};
use wreathgame_core::strategy::{plan_parameters, CopierSpec, LamplighterSpec, PlanError, StrategyPlan};
use wreathgame_core::wcr::CopSpec;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("graph too small: {0}")]
    GraphTooSmall(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    #[default]
    Lamplighter,
    Wcr,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RobberSpec {
    #[default]
    Transferred,
}

/// One game, read from a single JSON document.
///
/// For `"game":"wcr"` the graph is `Omega wr Lambda` of the streetmap and the
/// robber plays the transferred lamplighter strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub game: GameKind,
    pub streetmap: StreetmapSpec,
    pub n: usize,
    pub sigma: u32,
    pub rho: u32,
    /// One spec for all copiers, or one per copier.
    #[serde(default = "default_copiers")]
    pub copiers: Vec<CopierSpec>,
    #[serde(default = "default_lamplighter")]
    pub lamplighter: LamplighterSpec,
    #[serde(default = "default_cops")]
    pub cops: CopSpec,
    #[serde(default)]
    pub robber: RobberSpec,
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub budget: CopierBudget,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_copiers() -> Vec<CopierSpec> {
    vec![CopierSpec::Greedy]
}

fn default_lamplighter() -> LamplighterSpec {
    LamplighterSpec::Sweep
}

fn default_cops() -> CopSpec {
    CopSpec::Greedy
}

pub(crate) fn default_horizon() -> u64 {
    200
}

/// A config that passed validation, with the pieces the engines need.
#[derive(Debug)]
pub struct Validated {
    pub streetmap: Arc<Streetmap>,
    pub copiers: Vec<CopierSpec>,
    pub plan: StrategyPlan,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        Self::from_json(&text)
    }

    /// Checks the engines' preconditions without running anything.
    pub fn validate(&self) -> Result<Validated, ConfigError> {
        let streetmap = build_streetmap(&self.streetmap)?;
        let copiers = match self.copiers.len() {
            1 => vec![self.copiers[0]; self.n],
            k if k == self.n => self.copiers.clone(),
            k => return Err(ConfigError::Invalid(format!("{k} copier specs for n = {}", self.n))),
        };
        let plan = plan_for(&streetmap, self.n, self.sigma, self.rho)?;
        Ok(Validated { streetmap, copiers, plan })
    }
}

pub fn build_streetmap(spec: &StreetmapSpec) -> Result<Arc<Streetmap>, ConfigError> {
    Streetmap::from_spec(spec).map(Arc::new).map_err(|e| ConfigError::Invalid(format!("streetmap: {e}")))
}

/// The lamplighter's plan, with graph-too-small separated from other errors.
pub fn plan_for(streetmap: &Streetmap, n: usize, sigma: u32, rho: u32) -> Result<StrategyPlan, ConfigError> {
    if n == 0 || sigma == 0 || rho == 0 {
        return Err(ConfigError::Invalid(format!("n, sigma and rho must be positive (got {n}, {sigma}, {rho})")));
    }
    plan_parameters(streetmap, n, sigma, rho).map_err(|e| match e {
        PlanError::GraphTooSmall(m) => ConfigError::GraphTooSmall(m),
        other => ConfigError::Invalid(other.to_string()),
    })
}
