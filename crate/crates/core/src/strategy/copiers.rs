use std::collections::BTreeSet;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{ball, step_toward};
use crate::lamp::{Board, CopierStrategy, GameParams, GameState, Move, Streetmap, StrategyError};
use crate::vertex::VertexId;

/// Search bound for the copiers' shortest-path steps.
const CHASE_CUTOFF: u64 = 1 << 20;

/// A random board: position in `area`, and each lamp of `area` switched with
/// probability 1/3 to a state within distance 2 of the base state.
pub fn random_board(streetmap: &Streetmap, area: &BTreeSet<VertexId>, rng: &mut ChaCha8Rng) -> Result<Board, StrategyError> {
    let err = |e: crate::graph::GraphError| StrategyError(e.to_string());
    let p = area.iter().choose(rng).ok_or_else(|| StrategyError("empty area of play".into()))?.clone();
    let states: Vec<VertexId> = ball(streetmap.omega().as_ref(), streetmap.base_state(), 2).map_err(err)?.into_iter().collect();
    let mut board = streetmap.default_board(p);
    for x in area {
        if rng.gen_ratio(1, 3) {
            let s = states.choose(rng).expect("ball contains its center").clone();
            board.phi.set(x.clone(), s, streetmap.base_state());
        }
    }
    Ok(board)
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Never moves.
#[derive(Debug)]
pub struct Stationary {
    rng: ChaCha8Rng,
}

impl Stationary {
    pub fn new(seed: u64) -> Self {
        Self { rng: seeded(seed) }
    }
}

impl CopierStrategy for Stationary {
    fn name(&self) -> String {
        "stationary".into()
    }

    fn initial_board(&mut self, streetmap: &Streetmap, _: &GameParams, area: &BTreeSet<VertexId>, _: usize) -> Result<Board, StrategyError> {
        random_board(streetmap, area, &mut self.rng)
    }

    fn play_turn(&mut self, _: &Streetmap, _: &GameState, _: usize, _: u32) -> Result<Vec<Move>, StrategyError> {
        Ok(Vec::new())
    }
}

/// Uniformly random moves from a seeded stream.
#[derive(Debug)]
pub struct RandomWalker {
    rng: ChaCha8Rng,
}

impl RandomWalker {
    pub fn new(seed: u64) -> Self {
        Self { rng: seeded(seed) }
    }
}

impl CopierStrategy for RandomWalker {
    fn name(&self) -> String {
        "random".into()
    }

    fn initial_board(&mut self, streetmap: &Streetmap, _: &GameParams, area: &BTreeSet<VertexId>, _: usize) -> Result<Board, StrategyError> {
        random_board(streetmap, area, &mut self.rng)
    }

    fn play_turn(&mut self, streetmap: &Streetmap, state: &GameState, index: usize, budget: u32) -> Result<Vec<Move>, StrategyError> {
        let mut b = state.copier_boards[index].clone();
        let mut out = Vec::new();
        for _ in 0..budget {
            let options = streetmap.single_moves(&b).map_err(|e| StrategyError(e.to_string()))?;
            let Some((mv, next)) = options.into_iter().choose(&mut self.rng) else { break };
            out.push(mv);
            b = next;
        }
        Ok(out)
    }
}

/// Moves one step closer to the lamplighter's board at every move. Among the
/// moves that get closer it prefers fixing the lamp underneath, then walking
/// toward the lamplighter's position along a shortest path of lamps, then any
/// other walk.
#[derive(Debug)]
pub struct GreedyChaser {
    rng: ChaCha8Rng,
}

impl GreedyChaser {
    pub fn new(seed: u64) -> Self {
        Self { rng: seeded(seed) }
    }

    /// The next greedy move from `b` toward `target`, if the boards differ.
    pub fn next_move(streetmap: &Streetmap, b: &Board, target: &Board) -> Result<Option<Move>, StrategyError> {
        let err = |e: crate::graph::GraphError| StrategyError(e.to_string());
        let Some(d) = streetmap.board_distance(b, target, CHASE_CUTOFF).map_err(|e| StrategyError(e.to_string()))? else {
            return Ok(None);
        };
        if d == 0 {
            return Ok(None);
        }
        let mine = streetmap.state_at(b, &b.p);
        let wanted = streetmap.state_at(target, &b.p);
        let mut candidates = Vec::new();
        if mine != wanted {
            if let Some(s) = step_toward(streetmap.omega().as_ref(), mine, wanted, CHASE_CUTOFF).map_err(err)? {
                candidates.push(Move::SetState { new_state: s });
            }
        }
        let toward = step_toward(streetmap.lambda().as_ref(), &b.p, &target.p, CHASE_CUTOFF).map_err(err)?;
        if let Some(to) = &toward {
            candidates.push(Move::Walk { to: to.clone() });
        }
        for (mv, _) in streetmap.single_moves(b).map_err(err)? {
            if !candidates.contains(&mv) {
                candidates.push(mv);
            }
        }
        for mv in candidates {
            let next = streetmap.apply(b, &mv).map_err(err)?.expect("candidate moves are adjacent");
            let closer = streetmap.board_distance(&next, target, d - 1).map_err(|e| StrategyError(e.to_string()))?;
            if closer == Some(d - 1) {
                return Ok(Some(mv));
            }
        }
        Err(StrategyError(format!("no move from {b:?} gets closer to {target:?}")))
    }
}

impl CopierStrategy for GreedyChaser {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn initial_board(&mut self, streetmap: &Streetmap, _: &GameParams, area: &BTreeSet<VertexId>, _: usize) -> Result<Board, StrategyError> {
        random_board(streetmap, area, &mut self.rng)
    }

    fn play_turn(&mut self, streetmap: &Streetmap, state: &GameState, index: usize, budget: u32) -> Result<Vec<Move>, StrategyError> {
        let target = &state.lamplighter_board;
        let mut b = state.copier_boards[index].clone();
        let mut out = Vec::new();
        for _ in 0..budget {
            let Some(mv) = Self::next_move(streetmap, &b, target)? else { break };
            b = streetmap
                .apply(&b, &mv)
                .map_err(|e| StrategyError(e.to_string()))?
                .ok_or_else(|| StrategyError(format!("greedy produced a non-adjacent move {mv:?}")))?;
            out.push(mv);
        }
        Ok(out)
    }
}

/// Copier strategies selectable from a run configuration:
/// `{"kind":"stationary"}`, `{"kind":"random","seed":7}`, `{"kind":"greedy"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CopierSpec {
    Stationary,
    Random {
        #[serde(default)]
        seed: u64,
    },
    Greedy,
}

impl CopierSpec {
    pub fn label(&self) -> String {
        match self {
            CopierSpec::Stationary => "stationary".into(),
            CopierSpec::Random { seed } => format!("random{seed}"),
            CopierSpec::Greedy => "greedy".into(),
        }
    }

    /// Builds copier `index` for a game seeded with `game_seed`. Initial
    /// boards are drawn from a stream derived from both seeds.
    pub fn build(&self, game_seed: u64, index: usize) -> Box<dyn CopierStrategy> {
        let own = match self {
            CopierSpec::Random { seed } => *seed,
            _ => 0,
        };
        let mut mix = seeded(game_seed ^ own.rotate_left(29));
        let skip = index as u64 + 1;
        let mut seed = 0;
        for _ in 0..skip {
            seed = mix.gen();
        }
        match self {
            CopierSpec::Stationary => Box::new(Stationary::new(seed)),
            CopierSpec::Random { .. } => Box::new(RandomWalker::new(seed)),
            CopierSpec::Greedy => Box::new(GreedyChaser::new(seed)),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::{distance, InfinitePath, PathGraph};
    use crate::lamp::Phase;
    use crate::strategy::plan_parameters;
    use crate::support::FinSupportedMap;

    fn i(x: i64) -> VertexId {
        VertexId::Int(x)
    }

    fn street() -> Streetmap {
        Streetmap::new(Arc::new(PathGraph::new(2).unwrap()), i(0), Arc::new(InfinitePath)).unwrap()
    }

    fn board(p: i64, lamps: &[(i64, i64)]) -> Board {
        Board { p: i(p), phi: FinSupportedMap::from_entries(lamps.iter().map(|&(a, b)| (i(a), i(b))), &i(0)) }
    }

    fn state(lamplighter: Board, copier: Board) -> GameState {
        let plan = plan_parameters(&street(), 1, 3, 1).unwrap();
        GameState {
            params: plan.game_params(),
            area_of_play: plan.lamps(),
            lamplighter_board: lamplighter,
            copier_boards: vec![copier],
            turn: 1,
            phase: Phase::CopiersToMove,
            lamplighter_moves_used: 0,
            copier_moves_used: vec![0],
        }
    }

    #[test]
    fn stationary_never_moves() {
        let m = street();
        let s = state(board(0, &[]), board(9, &[]));
        assert!(Stationary::new(1).play_turn(&m, &s, 0, 3).unwrap().is_empty());
    }

    #[test]
    fn greedy_walks_a_geodesic() {
        let m = street();
        let s = state(board(0, &[]), board(5, &[]));
        let moves = GreedyChaser::new(1).play_turn(&m, &s, 0, 3).unwrap();
        assert_eq!(moves, [4, 3, 2].map(|x| Move::Walk { to: i(x) }));
        // each step reduces the lamp-graph distance by one
        let end = distance(m.lambda().as_ref(), &i(2), &i(0), 10).unwrap();
        assert_eq!(end, Some(2));
    }

    #[test]
    fn greedy_fixes_lamp_first() {
        let m = street();
        let s = state(board(0, &[(5, 1)]), board(5, &[]));
        let moves = GreedyChaser::new(1).play_turn(&m, &s, 0, 3).unwrap();
        assert_eq!(moves[0], Move::SetState { new_state: i(1) });
        assert_eq!(moves[1], Move::Walk { to: i(4) });
    }

    #[test]
    fn greedy_reaches_equal_board_and_stops() {
        let m = street();
        let target = board(0, &[(2, 1)]);
        let s = state(target.clone(), board(0, &[]));
        let moves = GreedyChaser::new(1).play_turn(&m, &s, 0, 10).unwrap();
        let mut b = board(0, &[]);
        for mv in &moves {
            b = m.apply(&b, mv).unwrap().unwrap();
        }
        assert_eq!(b, target);
        assert_eq!(moves.len() as u64, m.board_distance(&board(0, &[]), &target, 10).unwrap().unwrap());
    }

    #[test]
    fn random_walker_is_seeded() {
        let m = street();
        let s = state(board(0, &[]), board(5, &[]));
        let a = RandomWalker::new(9).play_turn(&m, &s, 0, 3).unwrap();
        let b = RandomWalker::new(9).play_turn(&m, &s, 0, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn spec_parsing() {
        let v: Vec<CopierSpec> = serde_json::from_str(r#"[{"kind":"greedy"},{"kind":"random","seed":7},{"kind":"stationary"}]"#).unwrap();
        assert_eq!(v, vec![CopierSpec::Greedy, CopierSpec::Random { seed: 7 }, CopierSpec::Stationary]);
    }
}
