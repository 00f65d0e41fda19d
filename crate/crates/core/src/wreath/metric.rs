//! Exact distances in `Omega wr Lambda` without searching the product.
//!
//! Moving from `(f1, p1)` to `(f2, p2)` needs, for every lamp `x` where the
//! configurations differ, at least `d_Omega(f1(x), f2(x))` state changes made
//! while standing on `x`, and a walk in `Lambda` from `p1` to `p2` that visits
//! every such lamp. Both bounds are attained together, so the distance is the
//! sum of the state distances plus the shortest covering walk.

use super::WreathProduct;
use crate::graph::{fast_distance, GraphError, LazyGraph};
use crate::support::FinSupportedMap;
use crate::vertex::VertexId;

/// Largest number of differing lamps solved with the subset dynamic program
/// on lamp graphs that are not laid out on a line.
pub const HELD_KARP_LIMIT: usize = 14;

pub(super) enum Tour {
    Exact(Option<u64>),
    TooManyLamps,
}

pub(super) fn lamp_tour(
    w: &WreathProduct,
    f1: &FinSupportedMap<VertexId, VertexId>,
    p1: &VertexId,
    f2: &FinSupportedMap<VertexId, VertexId>,
    p2: &VertexId,
    cutoff: u64,
) -> Result<Tour, GraphError> {
    let lambda = w.lambda().as_ref();
    lambda.check(p1)?;
    lambda.check(p2)?;
    let differing = f1.difference_keys(f2);
    // every differing lamp costs at least one state change
    if differing.len() as u64 > cutoff {
        return Ok(Tour::Exact(None));
    }
    let base = w.base_state();
    let mut state_cost = 0u64;
    for x in &differing {
        let (s1, s2) = (f1.get_or(x, base), f2.get_or(x, base));
        match fast_distance(w.omega().as_ref(), s1, s2, cutoff - state_cost)? {
            Some(d) => state_cost += d,
            None => return Ok(Tour::Exact(None)),
        }
    }
    let budget = cutoff - state_cost;
    let walk = match covering_walk(lambda, p1, p2, &differing, budget)? {
        Some(walk) => walk,
        None => return Ok(Tour::TooManyLamps),
    };
    Ok(Tour::Exact(walk.map(|d| d + state_cost)))
}

/// Shortest walk `from -> to` visiting every lamp in `stops`, if at most
/// `cutoff`. Returns `Ok(None)` when the instance is too large to solve here.
fn covering_walk(
    lambda: &dyn LazyGraph,
    from: &VertexId,
    to: &VertexId,
    stops: &[&VertexId],
    cutoff: u64,
) -> Result<Option<Option<u64>>, GraphError> {
    let within = |d: u64| (d <= cutoff).then_some(d);
    if stops.is_empty() {
        return Ok(Some(fast_distance(lambda, from, to, cutoff)?));
    }
    if let Some(d) = line_walk(lambda, from, to, stops) {
        return Ok(Some(within(d)));
    }
    if stops.len() > HELD_KARP_LIMIT {
        return Ok(None);
    }
    Ok(Some(held_karp(lambda, from, to, stops, cutoff)?))
}

/// On a line the walk must span `[lo, hi]`; it either sweeps to `lo` first or
/// to `hi` first.
fn line_walk(lambda: &dyn LazyGraph, from: &VertexId, to: &VertexId, stops: &[&VertexId]) -> Option<u64> {
    let p = lambda.line_coordinate(from)?;
    let q = lambda.line_coordinate(to)?;
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for x in stops {
        let c = lambda.line_coordinate(x)?;
        lo = lo.min(c);
        hi = hi.max(c);
    }
    let span = hi.abs_diff(lo);
    Some(span + (p.abs_diff(lo) + hi.abs_diff(q)).min(p.abs_diff(hi) + lo.abs_diff(q)))
}

fn held_karp(
    lambda: &dyn LazyGraph,
    from: &VertexId,
    to: &VertexId,
    stops: &[&VertexId],
    cutoff: u64,
) -> Result<Option<u64>, GraphError> {
    const INF: u64 = u64::MAX / 4;
    let k = stops.len();
    let d = |a: &VertexId, b: &VertexId| -> Result<u64, GraphError> {
        Ok(fast_distance(lambda, a, b, cutoff)?.unwrap_or(INF))
    };
    let start: Vec<u64> = stops.iter().map(|x| d(from, x)).collect::<Result<_, _>>()?;
    let end: Vec<u64> = stops.iter().map(|x| d(x, to)).collect::<Result<_, _>>()?;
    let mut pair = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let dij = d(stops[i], stops[j])?;
            pair[i][j] = dij;
            pair[j][i] = dij;
        }
    }
    let full = (1usize << k) - 1;
    let mut dp = vec![INF; (1 << k) * k];
    for i in 0..k {
        dp[(1 << i) * k + i] = start[i];
    }
    for mask in 1..=full {
        for i in 0..k {
            let cur = dp[mask * k + i];
            if cur >= INF || mask & (1 << i) == 0 {
                continue;
            }
            for j in 0..k {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let next = mask | (1 << j);
                let cand = cur + pair[i][j];
                if cand < dp[next * k + j] {
                    dp[next * k + j] = cand;
                }
            }
        }
    }
    let best = (0..k).map(|i| dp[full * k + i].saturating_add(end[i])).min().unwrap_or(INF);
    Ok((best <= cutoff).then_some(best))
}
