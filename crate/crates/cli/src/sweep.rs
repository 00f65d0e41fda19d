use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{build_streetmap, default_horizon, plan_for, ConfigError};
use crate::simulate::exit;
use wreathgame_core::lamp::{
    run_lamplighter_game, CopierBudget, CopierStrategy, GameConfig, GameObserver, Outcome, RunSetup, StreetmapSpec,
};
use wreathgame_core::strategy::{CopierSpec, InvariantMonitor, SweepLamplighter, Violation};
use wreathgame_core::trace::GameTrace;

/// A grid of lamplighter games: every combination of the listed values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub sigma: Vec<u32>,
    pub rho: Vec<u32>,
    pub streetmaps: Vec<StreetmapSpec>,
    /// Copier strategy used by every copier of a cell.
    pub adversaries: Vec<CopierSpec>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    /// Size of the worker pool; 0 picks one per core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub write_traces: bool,
    #[serde(default)]
    pub budget: CopierBudget,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub index: usize,
    pub streetmap: StreetmapSpec,
    pub n: usize,
    pub sigma: u32,
    pub rho: u32,
    pub adversary: CopierSpec,
    pub seed: u64,
}

/// One CSV row. Column order is part of the output format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRow {
    pub cell: usize,
    pub streetmap: String,
    pub n: usize,
    pub sigma: u32,
    pub rho: u32,
    pub adversary: String,
    pub seed: u64,
    pub horizon: u64,
    pub outcome: String,
    pub rounds: u64,
    /// Empty when every distance stayed above `dist_cutoff`.
    pub min_dist: Option<u64>,
    pub dist_cutoff: u64,
    pub min_dist_above_rho: bool,
    pub psi: u32,
    pub max_lamplighter_moves: u32,
    pub max_copier_moves: u32,
    pub violations: usize,
    pub fault: String,
    pub wall_ms: u64,
}

impl CellRow {
    pub fn is_fault(&self) -> bool {
        self.outcome == "fault"
    }

    pub fn is_clean(&self) -> bool {
        self.outcome == "survived" && self.min_dist_above_rho && self.violations == 0
    }
}

#[derive(Debug)]
pub struct CellResult {
    pub row: CellRow,
    pub trace: GameTrace,
    pub violations: Vec<Violation>,
}

#[derive(Debug)]
pub struct SweepReport {
    pub rows: Vec<CellRow>,
    pub wall_ms: u64,
}

impl SweepReport {
    pub fn exit_code(&self) -> i32 {
        if self.rows.iter().any(CellRow::is_fault) {
            exit::FAULT
        } else if self.rows.iter().all(CellRow::is_clean) {
            exit::OK
        } else {
            exit::LOST
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Cells in a fixed order: streetmap, n, sigma, rho, adversary, seed.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for m in &self.streetmaps {
            for &n in &self.n {
                for &sigma in &self.sigma {
                    for &rho in &self.rho {
                        for a in &self.adversaries {
                            for &seed in &self.seeds {
                                out.push(Cell {
                                    index: out.len(),
                                    streetmap: m.clone(),
                                    n,
                                    sigma,
                                    rho,
                                    adversary: *a,
                                    seed,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Every cell must admit a plan before anything runs.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.cells().is_empty() {
            return Err(ConfigError::Invalid("empty grid".into()));
        }
        for m in &self.streetmaps {
            let streetmap = build_streetmap(m)?;
            for &n in &self.n {
                for &sigma in &self.sigma {
                    for &rho in &self.rho {
                        plan_for(&streetmap, n, sigma, rho)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Plays one cell with the invariant monitor attached.
pub fn run_cell(cell: &Cell, horizon: u64, budget: CopierBudget) -> Result<CellResult, ConfigError> {
    let start = Instant::now();
    let streetmap = build_streetmap(&cell.streetmap)?;
    let plan = plan_for(&streetmap, cell.n, cell.sigma, cell.rho)?;
    let psi = plan.psi;
    let mut monitor = InvariantMonitor::new(plan);
    let mut copiers: Vec<Box<dyn CopierStrategy>> = (0..cell.n).map(|i| cell.adversary.build(cell.seed, i)).collect();
    let mut lamplighter = SweepLamplighter::new();
    let setup = RunSetup {
        n: cell.n,
        sigma: cell.sigma,
        rho: cell.rho,
        horizon,
        config: GameConfig { budget, seed: cell.seed, ..GameConfig::default() },
    };
    let r = {
        let mut observers: Vec<&mut dyn GameObserver> = vec![&mut monitor];
        run_lamplighter_game(streetmap, &setup, &mut copiers, &mut lamplighter, &mut observers)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?
    };
    let fault = match &r.outcome {
        Outcome::Fault { actor, reason } => format!("{actor}: {reason}"),
        _ => String::new(),
    };
    let row = CellRow {
        cell: cell.index,
        streetmap: cell.streetmap.short_name(),
        n: cell.n,
        sigma: cell.sigma,
        rho: cell.rho,
        adversary: cell.adversary.label(),
        seed: cell.seed,
        horizon,
        outcome: r.outcome.label().into(),
        rounds: r.rounds_completed,
        min_dist: r.min_dist,
        dist_cutoff: r.report_cutoff,
        min_dist_above_rho: r.min_dist.is_none_or(|d| d > u64::from(cell.rho)),
        psi,
        max_lamplighter_moves: r.max_lamplighter_moves,
        max_copier_moves: r.max_copier_moves,
        violations: monitor.violations.len(),
        fault,
        wall_ms: start.elapsed().as_millis() as u64,
    };
    Ok(CellResult { row, trace: r.trace, violations: monitor.violations })
}

/// Runs every cell on a bounded pool. `on_cell` sees each finished cell
/// (in completion order) before its trace is dropped.
pub fn run_sweep_with<F>(cfg: &SweepConfig, on_cell: F) -> anyhow::Result<SweepReport>
where
    F: Fn(&CellResult) -> anyhow::Result<()> + Sync,
{
    cfg.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
    let cells = cfg.cells();
    let mut rows = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let result = run_cell(cell, cfg.horizon, cfg.budget)?;
                log::debug!("cell {} {} in {} ms", cell.index, result.row.outcome, result.row.wall_ms);
                on_cell(&result)?;
                Ok(result.row)
            })
            .collect::<anyhow::Result<Vec<_>>>()
    })?;
    rows.sort_by_key(|r| r.cell);
    Ok(SweepReport { rows, wall_ms: start.elapsed().as_millis() as u64 })
}

/// Runs the sweep and writes `summary.csv` (and `traces/cell-N.ndjson` if
/// requested) under `out_dir`.
pub fn run_sweep(cfg: &SweepConfig, out_dir: &Path) -> anyhow::Result<SweepReport> {
    let traces = out_dir.join("traces");
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    if cfg.write_traces {
        fs::create_dir_all(&traces)?;
    }
    let report = run_sweep_with(cfg, |c| {
        if cfg.write_traces {
            let path = traces.join(format!("cell-{}.ndjson", c.row.cell));
            fs::write(&path, c.trace.to_ndjson()).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    })?;
    write_summary(&report.rows, &out_dir.join("summary.csv"))?;
    Ok(report)
}

pub fn write_summary(rows: &[CellRow], path: &Path) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_cell() -> SweepConfig {
        SweepConfig::from_json(
            r#"{"n":[1],"sigma":[1],"rho":[1],
                "streetmaps":[{"omega":{"family":"path","k":2},"base_state":0,"lambda":{"family":"infinite_path"}}],
                "adversaries":[{"kind":"greedy"}],"horizon":10,"workers":1}"#,
        )
        .unwrap()
    }

    #[test]
    fn one_cell_grid_gives_one_row() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_sweep(&one_cell(), dir.path()).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert!(report.rows[0].is_clean(), "{:?}", report.rows[0]);
        assert_eq!(report.exit_code(), 0);
        let text = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("cell,streetmap,n,sigma,rho,adversary,seed,horizon,outcome,"));
    }

    #[test]
    fn grid_order_and_size() {
        let mut cfg = one_cell();
        cfg.n = vec![1, 2];
        cfg.rho = vec![1, 2];
        cfg.seeds = vec![4, 5, 6];
        let cells = cfg.cells();
        assert_eq!(cells.len(), 12);
        assert!(cells.iter().enumerate().all(|(i, c)| c.index == i));
        assert_eq!((cells[3].n, cells[3].rho, cells[3].seed), (1, 2, 4));
    }

    #[test]
    fn too_small_street_is_rejected_up_front() {
        let mut cfg = one_cell();
        cfg.streetmaps[0].lambda = wreathgame_core::graph::GraphSpec::Path { k: 3 };
        assert!(matches!(cfg.validate(), Err(ConfigError::GraphTooSmall(_))));
    }
}
