//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Pinned tolerances: exact equality everywhere (integer distances and
//! formulas), sweep budget 300 s, isomorphism budget 1 s, metric cutoff 12.

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use wreathgame::verify::{board_iso, cayley_link, metric_axioms, METRIC_CUTOFF};
use wreathgame::{run_sweep_with, SweepConfig};
use wreathgame_core::graph::{isomorphism, materialize, Cycle, ExplicitGraph, InfinitePath, PathGraph};
use wreathgame_core::lamp::Streetmap;
use wreathgame_core::strategy::{
    big_r_for, path_lamps_for, plan_parameters, psi_for, radius_for, transfer_to_robber,
};
use wreathgame_core::trace::EventKind;
use wreathgame_core::vertex::VertexId;
use wreathgame_core::wcr::{run_wcr, GreedyCops, WcrOutcome, WcrSetup};
use wreathgame_core::wreath::WreathProduct;

const SWEEP_BUDGET: Duration = Duration::from_secs(300);
const ISO_BUDGET: Duration = Duration::from_secs(1);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

const SWEEP: &str = include_str!("../../../configs/acceptance_sweep.json");

/// Per-trace facts gathered while the sweep runs.
#[derive(Default)]
struct SweepFacts {
    traces: usize,
    /// Cells with an atomic instant at distance <= rho.
    close_calls: Vec<usize>,
    violations: BTreeMap<&'static str, usize>,
    first_violation: Option<String>,
    over_speed: Vec<usize>,
}

/// Criteria 1 and 2 come from the same 540 games.
fn sweep_criteria() -> (Verdict, Verdict) {
    let cfg = SweepConfig::from_json(SWEEP).expect("acceptance sweep config");
    let facts = Mutex::new(SweepFacts::default());
    let start = Instant::now();
    let report = run_sweep_with(&cfg, |c| {
        let rho = u64::from(c.row.rho);
        let close = c.trace.events.iter().any(|e| e.dist_min.flatten().is_some_and(|d| d <= rho));
        let mut f = facts.lock().unwrap();
        f.traces += 1;
        if close || !c.row.min_dist_above_rho {
            f.close_calls.push(c.row.cell);
        }
        if c.row.max_lamplighter_moves > c.row.psi {
            f.over_speed.push(c.row.cell);
        }
        for v in &c.violations {
            *f.violations.entry(v.invariant).or_default() += 1;
            if f.first_violation.is_none() {
                f.first_violation = Some(format!("cell {} t={} {}: {}", c.row.cell, v.t, v.invariant, v.detail));
            }
        }
        Ok(())
    });
    let elapsed = start.elapsed();
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            let msg = format!("sweep failed: {e:#}");
            return (verdict(false, msg.clone()), verdict(false, msg));
        }
    };
    let f = facts.into_inner().unwrap();
    let not_survived: Vec<_> = report.rows.iter().filter(|r| r.outcome != "survived").map(|r| r.cell).collect();
    let full_length = report.rows.iter().all(|r| r.rounds == cfg.horizon);
    let c1 = verdict(
        f.traces == 540 && not_survived.is_empty() && f.close_calls.is_empty() && full_length && elapsed <= SWEEP_BUDGET,
        format!(
            "{} traces of {} turns, {} not survived, {} with distance <= rho, {:.1} s (budget {} s)",
            f.traces,
            cfg.horizon,
            not_survived.len(),
            f.close_calls.len(),
            elapsed.as_secs_f64(),
            SWEEP_BUDGET.as_secs()
        ),
    );
    let total: usize = f.violations.values().sum();
    let c2 = verdict(
        total == 0 && f.over_speed.is_empty() && f.traces == 540,
        format!(
            "{} traces checked for speed, path position, states, disagreement, 6r+1 bound: {} violations {:?}, {} over speed{}",
            f.traces,
            total,
            f.violations,
            f.over_speed.len(),
            f.first_violation.map(|v| format!("; first: {v}")).unwrap_or_default()
        ),
    );
    (c1, c2)
}

/// Formulas recomputed here from scratch, and compared both with the helper
/// functions and with a plan built on `(P2, 0, Z)`.
fn criterion_3() -> Verdict {
    let m = Streetmap::new(Arc::new(PathGraph::new(2).unwrap()), VertexId::Int(0), Arc::new(InfinitePath)).unwrap();
    let mut points = 0;
    let mut bad = Vec::new();
    for n in 1..=5usize {
        for sigma in 1..=5u32 {
            for rho in 1..=2u32 {
                points += 1;
                let psi = 3 * n as u32 + sigma + rho + 1;
                let r = (sigma + rho).div_ceil(2) + n as u32;
                let len = sigma as usize + rho as usize + 2 * n;
                let big_r = 2 * (6 * u64::from(r) + 1);
                let plan = plan_parameters(&m, n, sigma, rho).unwrap();
                let ok = psi_for(n, sigma, rho) == psi
                    && radius_for(n, sigma, rho) == r
                    && path_lamps_for(n, sigma, rho) == len
                    && big_r_for(r) == big_r
                    && (plan.psi, plan.r, plan.path.vertices.len(), plan.big_r) == (psi, r, len, big_r);
                if !ok {
                    bad.push((n, sigma, rho));
                }
            }
        }
    }
    verdict(points == 50 && bad.is_empty(), format!("{points} grid points, {} mismatches {bad:?}", bad.len()))
}

/// The truncated cube built from coordinates: all permutations of
/// `(+-xi, +-1, +-1)` with `xi = sqrt 2 - 1`, joined at the shortest distance.
fn geometric_truncated_cube() -> ExplicitGraph {
    let xi = 2f64.sqrt() - 1.0;
    let mut pts = Vec::new();
    for axis in 0..3 {
        for signs in 0..8 {
            let s = |b: usize| if signs >> b & 1 == 1 { -1.0 } else { 1.0 };
            let mut q = [0.0; 3];
            q[axis] = s(0) * xi;
            q[(axis + 1) % 3] = s(1);
            q[(axis + 2) % 3] = s(2);
            pts.push(q);
        }
    }
    let d = |a: &[f64; 3], b: &[f64; 3]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
    let edge = 2.0 * xi;
    let mut edges = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (d(&pts[i], &pts[j]) - edge).abs() < 1e-9 {
                edges.push((VertexId::Int(i as i64), VertexId::Int(j as i64)));
            }
        }
    }
    ExplicitGraph::from_edges((0..pts.len() as i64).map(VertexId::Int), edges).unwrap()
}

fn wreath_match(lambda: Arc<dyn wreathgame_core::graph::LazyGraph>, target: &ExplicitGraph) -> Result<String, String> {
    let w = WreathProduct::new(Arc::new(PathGraph::new(2).unwrap()), VertexId::Int(0), lambda).map_err(|e| e.to_string())?;
    let g = materialize(&w, 64).map_err(|e| e.to_string())?;
    let map = isomorphism(&g, target).map_err(|e| e.to_string())?.ok_or("no isomorphism")?;
    let bijective = map.len() == g.vertex_count() && {
        let mut img: Vec<_> = map.values().collect();
        img.sort();
        img.dedup();
        img.len() == target.vertex_count()
    };
    let forward = g.edges().all(|(a, b)| target.has_edge(&map[a], &map[b]));
    let same_size = g.edge_count() == target.edge_count();
    if bijective && forward && same_size {
        Ok(format!("{}v/{}e", g.vertex_count(), g.edge_count()))
    } else {
        Err(format!("bijective={bijective} forward={forward} edges {}/{}", g.edge_count(), target.edge_count()))
    }
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let c8 = materialize(&Cycle::new(8).unwrap(), 8).unwrap();
    let cube = geometric_truncated_cube();
    let regular = cube.vertex_count() == 24 && cube.vertices().iter().all(|v| cube.degree(v) == Some(3));
    let a = wreath_match(Arc::new(PathGraph::new(2).unwrap()), &c8);
    let b = wreath_match(Arc::new(Cycle::new(3).unwrap()), &cube);
    let elapsed = start.elapsed();
    verdict(
        regular && a.is_ok() && b.is_ok() && elapsed < ISO_BUDGET,
        format!("P2wrP2~C8: {a:?}; P2wrC3~truncated cube (24 vertices, 3-regular: {regular}): {b:?}; {} ms", elapsed.as_millis()),
    )
}

fn criterion_5() -> Verdict {
    let r = board_iso(200, 5);
    verdict(r.passed, r.line())
}

fn criterion_6() -> Verdict {
    let rs = cayley_link(4);
    verdict(rs.len() == 2 && rs.iter().all(|r| r.passed), rs.iter().map(|r| r.line()).collect::<Vec<_>>().join("; "))
}

fn criterion_7() -> Verdict {
    let rs = metric_axioms(1000, 7);
    verdict(
        rs.len() == 4 && rs.iter().all(|r| r.passed),
        format!("cutoff {METRIC_CUTOFF}: {}", rs.iter().map(|r| r.line()).collect::<Vec<_>>().join("; ")),
    )
}

fn criterion_8() -> Verdict {
    let m = Arc::new(Streetmap::new(Arc::new(PathGraph::new(2).unwrap()), VertexId::Int(0), Arc::new(InfinitePath)).unwrap());
    let mut failures = Vec::new();
    let mut games = 0;
    for n in 1..=3 {
        for s in 1..=2 {
            games += 1;
            let plan = plan_parameters(&m, n, s, s).unwrap();
            let (mut robber, params) = transfer_to_robber(&plan, m.clone());
            let mut cops = GreedyCops::new(100 + n as u64);
            let setup = WcrSetup { n, sigma: s, rho: s, horizon: 100, seed: 100 + n as u64 };
            match run_wcr(robber.metric(), &setup, &mut cops, &mut robber) {
                Ok(r) => {
                    let in_ball_events = r
                        .trace
                        .events
                        .iter()
                        .filter(|e| e.ev == EventKind::Turn)
                        .filter_map(|e| e.get("in_ball").and_then(|b| b.as_bool()))
                        .collect::<Vec<_>>();
                    let ok = r.outcome == WcrOutcome::Survived
                        && r.in_ball_history == vec![true; 100]
                        && in_ball_events == vec![true; 100]
                        && r.max_robber_path <= params.psi as usize
                        && !r.trace.events.iter().any(|e| e.ev == EventKind::Capture);
                    if !ok {
                        failures.push(format!("n={n} s={s}: {:?}, {} turns in ball", r.outcome, r.in_ball_history.iter().filter(|b| **b).count()));
                    }
                }
                Err(e) => failures.push(format!("n={n} s={s}: {e}")),
            }
        }
    }
    verdict(failures.is_empty(), format!("{games} games of 100 turns vs greedy cops, failures: {failures:?}"))
}

/// Two runs of the released binary with the same config and seed.
fn criterion_9() -> Verdict {
    let dir = std::env::temp_dir().join(format!("wreathgame-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    let mut notes = Vec::new();
    let mut ok = true;
    for cfg in ["simulate_lamplighter.json", "simulate_wcr.json"] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.join(format!("{cfg}.{run}.ndjson"));
            let status = Command::new(env!("CARGO_BIN_EXE_wreathgame"))
                .args(["simulate", "--config", &format!("{root}/{cfg}"), "--seed", "42", "--out"])
                .arg(&out)
                .status()
                .expect("run wreathgame");
            outputs.push((status.code(), std::fs::read(&out).unwrap_or_default()));
        }
        let same = outputs[0] == outputs[1] && !outputs[0].1.is_empty();
        ok &= same;
        notes.push(format!("{cfg}: {} bytes, identical={same}", outputs[0].1.len()));
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict(ok, notes.join("; "))
}

fn main() {
    let (c1, c2) = sweep_criteria();
    let results = [
        ("1 evasion sweep", c1),
        ("2 strategy invariants", c2),
        ("3 parameter formulas", criterion_3()),
        ("4 small wreath isomorphisms", criterion_4()),
        ("5 board-graph isomorphism", criterion_5()),
        ("6 Cayley link", criterion_6()),
        ("7 metric properties", criterion_7()),
        ("8 WCR transfer", criterion_8()),
        ("9 determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (name, v) in &results {
        println!("{} criterion {name}: {}", if v.passed { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
