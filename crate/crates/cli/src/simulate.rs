use std::sync::Arc;

use serde::Serialize;

use crate::config::{ConfigError, GameKind, RobberSpec, RunConfig};
use wreathgame_core::lamp::{run_lamplighter_game, CopierStrategy, GameConfig, GameObserver, Outcome, RunSetup};
use wreathgame_core::strategy::{transfer_to_robber, InvariantMonitor, Violation};
use wreathgame_core::trace::GameTrace;
use wreathgame_core::wcr::{run_wcr, WcrOutcome, WcrSetup};

/// Process exit codes shared by all subcommands.
pub mod exit {
    pub const OK: i32 = 0;
    /// The copiers (or cops) beat the protagonist, or an invariant broke.
    pub const LOST: i32 = 1;
    pub const CONFIG_INVALID: i32 = 2;
    pub const FAULT: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Survived,
    Lost,
    Fault,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Survived => exit::OK,
            Status::Lost => exit::LOST,
            Status::Fault => exit::FAULT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimReport {
    pub status: Status,
    /// Engine outcome label, e.g. `survived`, `copier_win`, `captured`.
    pub outcome: String,
    pub detail: Option<String>,
    pub rounds: u64,
    /// Smallest distance seen between the protagonist and any opponent, if it
    /// was within the engine's reporting cutoff.
    pub min_dist: Option<u64>,
    pub violations: Vec<Violation>,
    pub trace: GameTrace,
}

/// Runs the configured game, with `seed` overriding the config's seed.
pub fn simulate(cfg: &RunConfig, seed: Option<u64>) -> Result<SimReport, ConfigError> {
    let v = cfg.validate()?;
    let seed = seed.unwrap_or(cfg.seed);
    let report = match cfg.game {
        GameKind::Lamplighter => {
            let mut copiers: Vec<Box<dyn CopierStrategy>> =
                v.copiers.iter().enumerate().map(|(i, c)| c.build(seed, i)).collect();
            let mut lamplighter = cfg.lamplighter.build();
            let mut monitor = InvariantMonitor::new(v.plan);
            let setup = RunSetup {
                n: cfg.n,
                sigma: cfg.sigma,
                rho: cfg.rho,
                horizon: cfg.horizon,
                config: GameConfig { budget: cfg.budget, seed, ..GameConfig::default() },
            };
            let r = {
                let mut observers: Vec<&mut dyn GameObserver> = vec![&mut monitor];
                run_lamplighter_game(v.streetmap, &setup, &mut copiers, lamplighter.as_mut(), &mut observers)
                    .map_err(|e| ConfigError::Invalid(e.to_string()))?
            };
            let (status, detail) = match &r.outcome {
                Outcome::Survived if monitor.violations.is_empty() => (Status::Survived, None),
                Outcome::Survived => (Status::Lost, Some(format!("{} invariant violations", monitor.violations.len()))),
                Outcome::CopierWin { copier } => (Status::Lost, Some(format!("copier {copier}"))),
                Outcome::Fault { actor, reason } => (Status::Fault, Some(format!("{actor}: {reason}"))),
            };
            SimReport {
                status,
                outcome: r.outcome.label().into(),
                detail,
                rounds: r.rounds_completed,
                min_dist: r.min_dist,
                violations: monitor.violations,
                trace: r.trace,
            }
        }
        GameKind::Wcr => {
            let RobberSpec::Transferred = cfg.robber;
            let (mut robber, _) = transfer_to_robber(&v.plan, Arc::clone(&v.streetmap));
            let mut cops = cfg.cops.build(seed);
            let setup = WcrSetup { n: cfg.n, sigma: cfg.sigma, rho: cfg.rho, horizon: cfg.horizon, seed };
            let r = run_wcr(robber.metric(), &setup, cops.as_mut(), &mut robber)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            let left_ball = r.in_ball_history.iter().filter(|b| !**b).count();
            let (status, detail) = match &r.outcome {
                WcrOutcome::Survived if left_ball == 0 => (Status::Survived, None),
                WcrOutcome::Survived => (Status::Lost, Some(format!("outside the ball after {left_ball} turns"))),
                WcrOutcome::Captured { cop } => (Status::Lost, Some(format!("cop {cop}"))),
                WcrOutcome::Fault { actor, reason } => (Status::Fault, Some(format!("{actor}: {reason}"))),
            };
            SimReport {
                status,
                outcome: r.outcome.label().into(),
                detail,
                rounds: r.rounds_completed,
                min_dist: r.min_cop_dist,
                violations: Vec::new(),
                trace: r.trace,
            }
        }
    };
    Ok(report)
}
