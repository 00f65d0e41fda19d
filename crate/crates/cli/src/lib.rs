//! Command-line harness: single games, parameter sweeps and verification
//! checks, all driven by JSON configs and reproducible from (config, seed).

pub mod config;
pub mod simulate;
pub mod sweep;
pub mod verify;

pub use config::{ConfigError, GameKind, RunConfig};
pub use simulate::{exit, simulate, SimReport, Status};
pub use sweep::{run_sweep, run_sweep_with, CellRow, SweepConfig, SweepReport};
pub use verify::{run_check, Check, CheckResult, VerifyOptions};
