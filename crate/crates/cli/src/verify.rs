use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use wreathgame_core::graph::{ball, distance, isomorphism, materialize, Cycle, ExplicitGraph, GraphRef, InfinitePath, PathGraph};
use wreathgame_core::group::{Element, Group};
use wreathgame_core::lamp::{Board, Streetmap};
use wreathgame_core::vertex::VertexId;
use wreathgame_core::wreath::{cayley_wreath_agreement, BoardGraph, BoardIsomorphism, WreathProduct};

/// Distance cutoff for the metric checks.
pub const METRIC_CUTOFF: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    IsoFig3,
    BoardIso,
    CayleyLink,
    MetricAxioms,
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "iso-fig3" => Ok(Check::IsoFig3),
            "board-iso" => Ok(Check::BoardIso),
            "cayley-link" => Ok(Check::CayleyLink),
            "metric-axioms" => Ok(Check::MetricAxioms),
            other => Err(format!("unknown check {other:?} (iso-fig3, board-iso, cayley-link, metric-axioms)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub radius: u64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { radius: 4, samples: 1000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<String>,
}

impl CheckResult {
    fn pass(name: &str, detail: String) -> Self {
        Self { name: name.into(), passed: true, detail, counterexample: None }
    }

    fn fail(name: &str, detail: String, counterexample: String) -> Self {
        Self { name: name.into(), passed: false, detail, counterexample: Some(counterexample) }
    }

    fn error(name: &str, e: impl std::fmt::Display) -> Self {
        Self { name: name.into(), passed: false, detail: format!("error: {e}"), counterexample: None }
    }

    pub fn line(&self) -> String {
        let mut s = format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail);
        if let Some(c) = &self.counterexample {
            s.push_str(&format!(" [counterexample: {c}]"));
        }
        s
    }
}

pub fn run_check(check: Check, opts: &VerifyOptions) -> Vec<CheckResult> {
    match check {
        Check::IsoFig3 => iso_fig3(),
        Check::BoardIso => vec![board_iso(opts.samples, opts.seed)],
        Check::CayleyLink => cayley_link(opts.radius),
        Check::MetricAxioms => metric_axioms(opts.samples, opts.seed),
    }
}

fn p2() -> GraphRef {
    Arc::new(PathGraph::new(2).expect("P2"))
}

/// The truncated cube: one vertex `3c + d` per cube corner `c` (bits) and
/// axis `d`. The three vertices of a corner form a triangle; `(c, d)` is
/// joined to `(c ^ 2^d, d)` along the cube edge in direction `d`.
pub fn truncated_cube() -> ExplicitGraph {
    let id = |c: i64, d: i64| VertexId::Int(3 * c + d);
    let mut edges = Vec::new();
    for c in 0..8 {
        for d in 0..3 {
            for e in d + 1..3 {
                edges.push((id(c, d), id(c, e)));
            }
            let other = c ^ (1 << d);
            if c < other {
                edges.push((id(c, d), id(other, d)));
            }
        }
    }
    ExplicitGraph::from_edges((0..24).map(VertexId::Int), edges).expect("valid edge list")
}

fn fig3_pair(name: &str, lambda: GraphRef, target: &ExplicitGraph) -> CheckResult {
    let run = || -> Result<CheckResult, Box<dyn std::error::Error>> {
        let w = WreathProduct::new(p2(), VertexId::Int(0), lambda)?;
        let g = materialize(&w, 64)?;
        let detail = format!("{} vertices, {} edges", g.vertex_count(), g.edge_count());
        Ok(match isomorphism(&g, target)? {
            Some(map) => {
                let ok = g.edges().all(|(a, b)| target.has_edge(&map[a], &map[b])) && g.edge_count() == target.edge_count();
                if ok {
                    CheckResult::pass(name, format!("{detail}, edge-preserving bijection found"))
                } else {
                    CheckResult::fail(name, detail, format!("{map:?}"))
                }
            }
            None => CheckResult::fail(name, detail, "no bijection exists".into()),
        })
    };
    run().unwrap_or_else(|e| CheckResult::error(name, e))
}

/// `P2 wr P2` is the 8-cycle and `P2 wr C3` the truncated cube.
pub fn iso_fig3() -> Vec<CheckResult> {
    let c8 = materialize(&Cycle::new(8).expect("C8"), 8).expect("finite");
    vec![
        fig3_pair("iso-fig3 P2wrP2~C8", p2(), &c8),
        fig3_pair("iso-fig3 P2wrC3~truncated-cube", Arc::new(Cycle::new(3).expect("C3")), &truncated_cube()),
    ]
}

pub fn five_cycle_street() -> Arc<Streetmap> {
    Arc::new(Streetmap::new(Arc::new(Cycle::new(5).expect("C5")), VertexId::Int(0), Arc::new(InfinitePath)).expect("streetmap"))
}

pub fn two_state_street() -> Arc<Streetmap> {
    Arc::new(Streetmap::new(p2(), VertexId::Int(0), Arc::new(InfinitePath)).expect("streetmap"))
}

/// A board on a line streetmap: position and lit lamps in `[-width, width]`,
/// each lamp lit with probability 1/3 in a state within distance 2 of the base.
pub fn sample_board(m: &Streetmap, width: i64, rng: &mut ChaCha8Rng) -> Board {
    let states: Vec<VertexId> = ball(m.omega().as_ref(), m.base_state(), 2).expect("finite ball").into_iter().collect();
    let mut b = m.default_board(VertexId::Int(rng.gen_range(-width..=width)));
    for x in -width..=width {
        if rng.gen_ratio(1, 3) {
            b.phi.set(VertexId::Int(x), states.choose(rng).expect("nonempty").clone(), m.base_state());
        }
    }
    b
}

/// The end of a random walk of `steps` single moves from `b`.
pub fn wander(m: &Streetmap, b: &Board, steps: u64, rng: &mut ChaCha8Rng) -> Board {
    let mut cur = b.clone();
    for _ in 0..steps {
        let moves = m.single_moves(&cur).expect("valid board");
        cur = moves.choose(rng).expect("boards have neighbors").1.clone();
    }
    cur
}

/// `Phi` and `Phi^-1` are mutually inverse and carry neighbor sets onto
/// neighbor sets, on random boards of `(C5, 0, Z)`.
pub fn board_iso(samples: usize, seed: u64) -> CheckResult {
    const NAME: &str = "board-iso (C5,0,Pinf)";
    let m = five_cycle_street();
    let iso = BoardIsomorphism::for_streetmap(m.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let b = sample_board(&m, 6, &mut rng);
        match iso.preserves_neighborhood(&b) {
            Ok(true) => {}
            Ok(false) => return CheckResult::fail(NAME, format!("{samples} boards"), format!("{b:?}")),
            Err(e) => return CheckResult::error(NAME, e),
        }
    }
    CheckResult::pass(NAME, format!("{samples} boards, neighbor sets match both ways"))
}

/// Neighbor-set agreement of `Cay(G,S) wr Cay(Z,{+-1})` and
/// `Cay(G wr Z, S u {+-1})` over balls around the identity: radius `radius`
/// for `Z2 wr Z`, one less for `Z3 wr Z`.
pub fn cayley_link(radius: u64) -> Vec<CheckResult> {
    let t = [Element::Int(1), Element::Int(-1)];
    let cases = [
        ("cayley-link Z2wrZ", Group::Cyclic { m: 2 }, vec![Element::Int(1)], radius),
        ("cayley-link Z3wrZ", Group::Cyclic { m: 3 }, vec![Element::Int(1), Element::Int(2)], radius.saturating_sub(1)),
    ];
    cases
        .into_iter()
        .map(|(name, g, s, r)| match cayley_wreath_agreement(&g, &s, &Group::Integers, &t, r) {
            Ok(rep) if rep.passed() => {
                CheckResult::pass(name, format!("radius {r}, {} vertices, 0 mismatches", rep.vertices_checked))
            }
            Ok(rep) => CheckResult::fail(
                name,
                format!("radius {r}, {} vertices, {} mismatches", rep.vertices_checked, rep.mismatches.len()),
                format!("{:?}", rep.mismatches[0]),
            ),
            Err(e) => CheckResult::error(name, e),
        })
        .collect()
}

/// Identity, symmetry and triangle inequality of the board distance on
/// `samples` triples per streetmap (cutoff 12), then agreement with plain
/// BFS on the board graph for `samples / 5` pairs.
pub fn metric_axioms(samples: usize, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (label, m) in [("(P2,0,Pinf)", two_state_street()), ("(C5,0,Pinf)", five_cycle_street())] {
        let name = format!("metric-axioms {label}");
        out.push(axioms_on(&name, &m, samples, &mut rng).unwrap_or_else(|e| CheckResult::error(&name, e)));
        let name = format!("metric-oracle {label}");
        out.push(oracle_on(&name, &m, samples / 5, &mut rng).unwrap_or_else(|e| CheckResult::error(&name, e)));
    }
    out
}

type CheckOutcome = Result<CheckResult, Box<dyn std::error::Error>>;

fn axioms_on(name: &str, m: &Streetmap, samples: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let d = |a: &Board, b: &Board| m.board_distance(a, b, METRIC_CUTOFF);
    let mut finite = 0;
    for _ in 0..samples {
        let a = sample_board(m, 3, rng);
        let steps = rng.gen_range(0..=8);
        let b = wander(m, &a, steps, rng);
        let steps = rng.gen_range(0..=8);
        let c = wander(m, &b, steps, rng);
        let (ab, ba, bc, ac) = (d(&a, &b)?, d(&b, &a)?, d(&b, &c)?, d(&a, &c)?);
        let triple = || format!("a={a:?} b={b:?} c={c:?}");
        if d(&a, &a)? != Some(0) || (ab == Some(0)) != (a == b) {
            return Ok(CheckResult::fail(name, "identity".into(), triple()));
        }
        if ab != ba {
            return Ok(CheckResult::fail(name, format!("symmetry {ab:?} vs {ba:?}"), triple()));
        }
        if let (Some(x), Some(y)) = (ab, bc) {
            if x + y <= METRIC_CUTOFF && ac.is_none_or(|z| z > x + y) {
                return Ok(CheckResult::fail(name, format!("triangle d(a,c)={ac:?} > {x}+{y}"), triple()));
            }
            finite += 1;
        }
    }
    Ok(CheckResult::pass(name, format!("{samples} triples ({finite} with both legs within {METRIC_CUTOFF})")))
}

fn oracle_on(name: &str, m: &Arc<Streetmap>, pairs: usize, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let graph = BoardGraph::new(m.clone());
    for _ in 0..pairs {
        let a = sample_board(m, 3, rng);
        let steps = rng.gen_range(0..=10);
        let b = wander(m, &a, steps, rng);
        let fast = m.board_distance(&a, &b, METRIC_CUTOFF)?;
        let bfs = distance(&graph, &a.clone().into(), &b.clone().into(), METRIC_CUTOFF)?;
        if fast != bfs {
            return Ok(CheckResult::fail(name, format!("{fast:?} vs BFS {bfs:?}"), format!("a={a:?} b={b:?}")));
        }
    }
    Ok(CheckResult::pass(name, format!("{pairs} pairs agree with BFS on the board graph")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_cube_shape() {
        let g = truncated_cube();
        assert_eq!(g.vertex_count(), 24);
        assert_eq!(g.edge_count(), 36);
        assert!(g.vertices().iter().all(|v| g.degree(v) == Some(3)));
    }

    #[test]
    fn small_runs_pass() {
        let opts = VerifyOptions { radius: 2, samples: 40, seed: 3 };
        for check in [Check::IsoFig3, Check::BoardIso, Check::CayleyLink, Check::MetricAxioms] {
            for r in run_check(check, &opts) {
                assert!(r.passed, "{}", r.line());
            }
        }
    }

    #[test]
    fn check_names_parse() {
        assert_eq!("cayley-link".parse::<Check>(), Ok(Check::CayleyLink));
        assert!("fig3".parse::<Check>().is_err());
    }
}
