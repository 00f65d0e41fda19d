use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{GraphError, LazyGraph};
use crate::vertex::VertexId;

/// A walk `v_0, v_1, ..., v_k` with consecutive vertices adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path {
    pub vertices: Vec<VertexId>,
}

impl Path {
    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn first(&self) -> Option<&VertexId> {
        self.vertices.first()
    }

    pub fn last(&self) -> Option<&VertexId> {
        self.vertices.last()
    }

    pub fn is_walk_in(&self, g: &dyn LazyGraph) -> bool {
        self.vertices.windows(2).all(|w| {
            g.neighbors(&w[0])
                .map(|ns| ns.binary_search(&w[1]).is_ok())
                .unwrap_or(false)
        })
    }

    /// A walk whose endpoints are exactly `length` apart.
    pub fn is_geodesic_in(&self, g: &dyn LazyGraph) -> bool {
        let (Some(a), Some(b)) = (self.first(), self.last()) else {
            return false;
        };
        let k = self.length() as u64;
        self.is_walk_in(g) && matches!(distance(g, a, b, k), Ok(Some(d)) if d == k)
    }
}

/// Shortest-path length between `u` and `v` if it is at most `cutoff`,
/// computed by bidirectional breadth-first search over the neighbor function.
pub fn distance(
    g: &dyn LazyGraph,
    u: &VertexId,
    v: &VertexId,
    cutoff: u64,
) -> Result<Option<u64>, GraphError> {
    g.check(u)?;
    g.check(v)?;
    if u == v {
        return Ok(Some(0));
    }
    let mut dist_a: HashMap<VertexId, u64> = HashMap::from([(u.clone(), 0)]);
    let mut dist_b: HashMap<VertexId, u64> = HashMap::from([(v.clone(), 0)]);
    let mut front_a = vec![u.clone()];
    let mut front_b = vec![v.clone()];
    let (mut depth_a, mut depth_b) = (0u64, 0u64);

    // No vertex lies in both visited sets, so the distance exceeds
    // depth_a + depth_b; the first layer that meets the other side is exact.
    loop {
        if depth_a + depth_b >= cutoff || front_a.is_empty() || front_b.is_empty() {
            return Ok(None);
        }
        let expand_a = front_a.len() <= front_b.len();
        let (front, own, other, depth) = if expand_a {
            (&mut front_a, &mut dist_a, &dist_b, &mut depth_a)
        } else {
            (&mut front_b, &mut dist_b, &dist_a, &mut depth_b)
        };
        let mut next = Vec::new();
        let mut best: Option<u64> = None;
        for x in front.iter() {
            for y in g.neighbors(x)? {
                if let Some(&dy) = other.get(&y) {
                    let cand = *depth + 1 + dy;
                    best = Some(best.map_or(cand, |b| b.min(cand)));
                }
                if !own.contains_key(&y) {
                    own.insert(y.clone(), *depth + 1);
                    next.push(y);
                }
            }
        }
        *depth += 1;
        *front = next;
        if let Some(b) = best {
            return Ok((b <= cutoff).then_some(b));
        }
    }
}

/// [`distance`] that uses a family's closed form when one exists.
pub fn fast_distance(
    g: &dyn LazyGraph,
    u: &VertexId,
    v: &VertexId,
    cutoff: u64,
) -> Result<Option<u64>, GraphError> {
    match g.closed_form_distance(u, v) {
        Some(d) => Ok((d <= cutoff).then_some(d)),
        None => distance(g, u, v, cutoff),
    }
}

/// Breadth-first layers `0..=radius` around `center`, with parent-free
/// bookkeeping. The last layers may be empty for small graphs.
fn layers(
    g: &dyn LazyGraph,
    center: &VertexId,
    radius: u64,
) -> Result<(Vec<Vec<VertexId>>, HashMap<VertexId, u64>), GraphError> {
    g.check(center)?;
    let mut dist = HashMap::from([(center.clone(), 0u64)]);
    let mut out = vec![vec![center.clone()]];
    for d in 1..=radius {
        let mut next = Vec::new();
        for x in &out[(d - 1) as usize] {
            for y in g.neighbors(x)? {
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d);
                    next.push(y);
                }
            }
        }
        let empty = next.is_empty();
        out.push(next);
        if empty {
            break;
        }
    }
    Ok((out, dist))
}

/// All vertices at distance at most `radius` from `center`.
pub fn ball(
    g: &dyn LazyGraph,
    center: &VertexId,
    radius: u64,
) -> Result<BTreeSet<VertexId>, GraphError> {
    let (_, dist) = layers(g, center, radius)?;
    Ok(dist.into_keys().collect())
}

/// A geodesic of exactly `length` edges starting at `base`.
///
/// The endpoint is the smallest vertex of the breadth-first layer at distance
/// `length`; the path is recovered by walking back through the smallest
/// parent at each layer.
pub fn find_geodesic(g: &dyn LazyGraph, base: &VertexId, length: u64) -> Result<Path, GraphError> {
    let (layers, dist) = layers(g, base, length)?;
    let not_found = || GraphError::NotFound { base: base.clone(), length };
    let end = layers
        .get(length as usize)
        .and_then(|layer| layer.iter().min())
        .ok_or_else(not_found)?
        .clone();
    let mut rev = vec![end.clone()];
    let mut cur = end;
    for d in (0..length).rev() {
        cur = g
            .neighbors(&cur)?
            .into_iter()
            .filter(|y| dist.get(y) == Some(&d))
            .min()
            .ok_or_else(not_found)?;
        rev.push(cur.clone());
    }
    rev.reverse();
    Ok(Path { vertices: rev })
}

/// First step of a shortest path from `from` to `to`, choosing the smallest
/// qualifying neighbor. `None` when the vertices coincide or lie further than
/// `cutoff` apart.
pub fn step_toward(
    g: &dyn LazyGraph,
    from: &VertexId,
    to: &VertexId,
    cutoff: u64,
) -> Result<Option<VertexId>, GraphError> {
    let Some(d) = fast_distance(g, from, to, cutoff)? else {
        return Ok(None);
    };
    if d == 0 {
        return Ok(None);
    }
    for y in g.neighbors(from)? {
        if fast_distance(g, &y, to, d - 1)? == Some(d - 1) {
            return Ok(Some(y));
        }
    }
    unreachable!("a vertex at distance {d} has a neighbor at distance {}", d - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Cycle, InfinitePath, PathGraph};
    use proptest::prelude::*;

    fn i(x: i64) -> VertexId {
        VertexId::Int(x)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&InfinitePath, &i(-2), &i(3), 10).unwrap(), Some(5));
        assert_eq!(distance(&Cycle::new(5).unwrap(), &i(0), &i(3), 10).unwrap(), Some(2));
        assert_eq!(distance(&InfinitePath, &i(0), &i(7), 3).unwrap(), None);
        assert_eq!(distance(&InfinitePath, &i(0), &i(7), 7).unwrap(), Some(7));
        assert_eq!(distance(&InfinitePath, &i(0), &i(7), 6).unwrap(), None);
        assert!(distance(&PathGraph::new(3).unwrap(), &i(0), &i(3), 4).is_err());
    }

    #[test]
    fn distance_in_disconnected_exhaustion() {
        let p = PathGraph::new(3).unwrap();
        assert_eq!(distance(&p, &i(0), &i(2), 100).unwrap(), Some(2));
    }

    #[test]
    fn ball_examples() {
        let b = ball(&InfinitePath, &i(0), 2).unwrap();
        assert_eq!(b.into_iter().collect::<Vec<_>>(), (-2..=2).map(i).collect::<Vec<_>>());
        assert_eq!(ball(&Cycle::new(5).unwrap(), &i(3), 0).unwrap().len(), 1);
        assert_eq!(ball(&Cycle::new(5).unwrap(), &i(0), 2).unwrap().len(), 5);
    }

    #[test]
    fn geodesic_examples() {
        let p = find_geodesic(&InfinitePath, &i(0), 4).unwrap();
        assert_eq!(p.vertices, (0..=4).map(|x| i(-x)).collect::<Vec<_>>());
        assert!(p.is_geodesic_in(&InfinitePath));
        assert!(matches!(
            find_geodesic(&PathGraph::new(3).unwrap(), &i(0), 5),
            Err(GraphError::NotFound { .. })
        ));
        let c = Cycle::new(7).unwrap();
        let g = find_geodesic(&c, &i(0), 3).unwrap();
        assert_eq!(g.vertices, vec![i(0), i(1), i(2), i(3)]);
        assert!(g.is_geodesic_in(&c));
    }

    #[test]
    fn step_toward_prefers_geodesic() {
        assert_eq!(step_toward(&InfinitePath, &i(0), &i(5), 10).unwrap(), Some(i(1)));
        assert_eq!(step_toward(&InfinitePath, &i(0), &i(0), 10).unwrap(), None);
        let c = Cycle::new(6).unwrap();
        // both directions are shortest: pick the smaller neighbor
        assert_eq!(step_toward(&c, &i(0), &i(3), 10).unwrap(), Some(i(1)));
    }

    proptest! {
        #[test]
        fn infinite_path_ball_size(c in -100i64..100, r in 0u64..20) {
            prop_assert_eq!(ball(&InfinitePath, &i(c), r).unwrap().len() as u64, 2 * r + 1);
        }

        #[test]
        fn closed_forms_agree_with_bfs(k in 3u64..12, a in 0i64..12, b in 0i64..12) {
            let (a, b) = (a % k as i64, b % k as i64);
            let c = Cycle::new(k).unwrap();
            prop_assert_eq!(distance(&c, &i(a), &i(b), 20).unwrap(), c.closed_form_distance(&i(a), &i(b)));
            let p = PathGraph::new(k).unwrap();
            prop_assert_eq!(distance(&p, &i(a), &i(b), 20).unwrap(), p.closed_form_distance(&i(a), &i(b)));
        }

        #[test]
        fn distance_metric_axioms_on_cycles(k in 3u64..15, a in 0i64..15, b in 0i64..15, c in 0i64..15) {
            let g = Cycle::new(k).unwrap();
            let m = k as i64;
            let (a, b, c) = (i(a % m), i(b % m), i(c % m));
            let d = |x: &VertexId, y: &VertexId| distance(&g, x, y, 30).unwrap().unwrap();
            prop_assert_eq!(d(&a, &a), 0);
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        }
    }
}
