use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{Family, GraphError, LazyGraph};
use crate::vertex::VertexId;

/// Largest vertex count accepted by [`isomorphism`].
pub const ISOMORPHISM_VERTEX_LIMIT: usize = 64;

/// A fully materialized finite simple graph.
#[derive(Debug, Clone)]
pub struct ExplicitGraph {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    adj: Vec<Vec<usize>>,
}

impl ExplicitGraph {
    /// Builds a graph from a vertex list and an undirected edge list.
    pub fn from_edges(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
        vertices.sort();
        vertices.dedup();
        if vertices.is_empty() {
            return Err(GraphError::InvalidSpec("explicit graph without vertices".into()));
        }
        let index: HashMap<VertexId, usize> =
            vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for (a, b) in edges {
            let ia = *index.get(&a).ok_or_else(|| GraphError::InvalidVertex(a.clone()))?;
            let ib = *index.get(&b).ok_or_else(|| GraphError::InvalidVertex(b.clone()))?;
            if ia == ib {
                return Err(GraphError::InvalidSpec(format!("loop at {a}")));
            }
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { vertices, index, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn degree(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).map(|&i| self.adj[i].len())
    }

    pub fn has_edge(&self, a: &VertexId, b: &VertexId) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&ia), Some(&ib)) => self.adj[ia].binary_search(&ib).is_ok(),
            _ => false,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> {
        self.adj.iter().enumerate().flat_map(move |(i, list)| {
            list.iter()
                .filter(move |&&j| i < j)
                .map(move |&j| (&self.vertices[i], &self.vertices[j]))
        })
    }

    fn masks(&self) -> Vec<u64> {
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u64, |m, &j| m | (1 << j)))
            .collect()
    }
}

impl LazyGraph for ExplicitGraph {
    fn base(&self) -> VertexId {
        self.vertices[0].clone()
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let i = *self.index.get(v).ok_or_else(|| GraphError::InvalidVertex(v.clone()))?;
        Ok(self.adj[i].iter().map(|&j| self.vertices[j].clone()).collect())
    }

    fn family(&self) -> Family {
        Family::ExplicitFinite
    }
}

/// Materializes the connected component of `g.base()`, failing once more than
/// `limit` vertices have been discovered.
pub fn materialize(g: &dyn LazyGraph, limit: usize) -> Result<ExplicitGraph, GraphError> {
    let base = g.base();
    let mut seen: BTreeMap<VertexId, ()> = BTreeMap::from([(base.clone(), ())]);
    let mut queue = VecDeque::from([base]);
    let mut edges = Vec::new();
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(&x)? {
            if x < y {
                edges.push((x.clone(), y.clone()));
            }
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), ());
                if seen.len() > limit {
                    return Err(GraphError::TooLarge { count: seen.len(), limit });
                }
                queue.push_back(y);
            }
        }
    }
    ExplicitGraph::from_edges(seen.into_keys(), edges)
}

/// An edge-preserving bijection `V(g1) -> V(g2)` whose inverse also preserves
/// edges, or `None` if the graphs are not isomorphic.
///
/// Backtracking over a breadth-first vertex order of `g1`, pruned by degree
/// and by adjacency to already-mapped vertices. Deterministic. The answer is
/// verified edge-by-edge in both directions before it is returned.
pub fn isomorphism(
    g1: &ExplicitGraph,
    g2: &ExplicitGraph,
) -> Result<Option<BTreeMap<VertexId, VertexId>>, GraphError> {
    for g in [g1, g2] {
        if g.vertex_count() > ISOMORPHISM_VERTEX_LIMIT {
            return Err(GraphError::TooLarge {
                count: g.vertex_count(),
                limit: ISOMORPHISM_VERTEX_LIMIT,
            });
        }
    }
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let deg1: Vec<usize> = g1.adj.iter().map(Vec::len).collect();
    let deg2: Vec<usize> = g2.adj.iter().map(Vec::len).collect();
    let (mut s1, mut s2) = (deg1.clone(), deg2.clone());
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Ok(None);
    }

    let order = search_order(g1);
    let (m1, m2) = (g1.masks(), g2.masks());
    let mut map = vec![usize::MAX; n];
    let mut search = Backtrack { order: &order, m1: &m1, m2: &m2, deg1: &deg1, deg2: &deg2, map: &mut map };
    if !search.assign(0, 0) {
        return Ok(None);
    }

    let bijection: BTreeMap<VertexId, VertexId> = (0..n)
        .map(|i| (g1.vertices[i].clone(), g2.vertices[map[i]].clone()))
        .collect();
    let forward = g1.edges().all(|(a, b)| g2.has_edge(&bijection[a], &bijection[b]));
    let inverse: BTreeMap<&VertexId, &VertexId> = bijection.iter().map(|(a, b)| (b, a)).collect();
    let backward = g2.edges().all(|(a, b)| g1.has_edge(inverse[a], inverse[b]));
    assert!(
        forward && backward && inverse.len() == n,
        "backtracking produced a map that is not an isomorphism"
    );
    Ok(Some(bijection))
}

/// Breadth-first order from the highest-degree vertex of each component, so
/// every vertex after the first in a component has a mapped neighbor.
fn search_order(g: &ExplicitGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n)
            .filter(|&i| !seen[i])
            .max_by_key(|&i| (g.adj[i].len(), std::cmp::Reverse(i)))
            .expect("unvisited vertex exists");
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &g.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

struct Backtrack<'a> {
    order: &'a [usize],
    m1: &'a [u64],
    m2: &'a [u64],
    deg1: &'a [usize],
    deg2: &'a [usize],
    map: &'a mut [usize],
}

impl Backtrack<'_> {
    fn assign(&mut self, pos: usize, used: u64) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let u = self.order[pos];
        for w in 0..self.m2.len() {
            if used & (1 << w) != 0 || self.deg2[w] != self.deg1[u] {
                continue;
            }
            let consistent = self.order[..pos].iter().all(|&x| {
                let a = self.m1[u] & (1 << x) != 0;
                let b = self.m2[w] & (1 << self.map[x]) != 0;
                a == b
            });
            if !consistent {
                continue;
            }
            self.map[u] = w;
            if self.assign(pos + 1, used | (1 << w)) {
                return true;
            }
        }
        self.map[u] = usize::MAX;
        false
    }
}
