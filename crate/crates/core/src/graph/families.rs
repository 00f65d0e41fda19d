use super::{Family, GraphError, LazyGraph};
use crate::vertex::VertexId;

/// The two-way infinite path on the integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct InfinitePath;

/// `P_k`: vertices `0..k`, edges between consecutive integers.
#[derive(Debug, Clone, Copy)]
pub struct PathGraph {
    k: u64,
}

/// `C_k`: vertices `0..k` arranged in a cycle. Requires `k >= 3`.
#[derive(Debug, Clone, Copy)]
pub struct Cycle {
    k: u64,
}

impl PathGraph {
    pub fn new(k: u64) -> Result<Self, GraphError> {
        if k == 0 {
            return Err(GraphError::InvalidSpec("path needs at least one vertex".into()));
        }
        Ok(Self { k })
    }
}

impl Cycle {
    pub fn new(k: u64) -> Result<Self, GraphError> {
        if k < 3 {
            return Err(GraphError::InvalidSpec(format!("cycle needs k >= 3, got {k}")));
        }
        Ok(Self { k })
    }
}

fn int_in(v: &VertexId, k: u64) -> Option<i64> {
    v.as_int().filter(|&i| i >= 0 && (i as u64) < k)
}

impl LazyGraph for InfinitePath {
    fn base(&self) -> VertexId {
        VertexId::Int(0)
    }

    fn contains(&self, v: &VertexId) -> bool {
        v.as_int().is_some()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let i = v.as_int().ok_or_else(|| GraphError::InvalidVertex(v.clone()))?;
        Ok(vec![VertexId::Int(i - 1), VertexId::Int(i + 1)])
    }

    fn family(&self) -> Family {
        Family::InfinitePath
    }

    fn closed_form_distance(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        Some(u.as_int()?.abs_diff(v.as_int()?))
    }

    fn line_coordinate(&self, v: &VertexId) -> Option<i64> {
        v.as_int()
    }
}

impl LazyGraph for PathGraph {
    fn base(&self) -> VertexId {
        VertexId::Int(0)
    }

    fn contains(&self, v: &VertexId) -> bool {
        int_in(v, self.k).is_some()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let i = int_in(v, self.k).ok_or_else(|| GraphError::InvalidVertex(v.clone()))?;
        let mut out = Vec::with_capacity(2);
        if i > 0 {
            out.push(VertexId::Int(i - 1));
        }
        if ((i + 1) as u64) < self.k {
            out.push(VertexId::Int(i + 1));
        }
        Ok(out)
    }

    fn family(&self) -> Family {
        Family::Path(self.k)
    }

    fn closed_form_distance(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        Some(int_in(u, self.k)?.abs_diff(int_in(v, self.k)?))
    }

    fn line_coordinate(&self, v: &VertexId) -> Option<i64> {
        int_in(v, self.k)
    }
}

impl LazyGraph for Cycle {
    fn base(&self) -> VertexId {
        VertexId::Int(0)
    }

    fn contains(&self, v: &VertexId) -> bool {
        int_in(v, self.k).is_some()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>, GraphError> {
        let i = int_in(v, self.k).ok_or_else(|| GraphError::InvalidVertex(v.clone()))?;
        let k = self.k as i64;
        let mut out = vec![VertexId::Int((i + k - 1) % k), VertexId::Int((i + 1) % k)];
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn family(&self) -> Family {
        Family::Cycle(self.k)
    }

    fn closed_form_distance(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        let d = int_in(u, self.k)?.abs_diff(int_in(v, self.k)?);
        Some(d.min(self.k - d))
    }
}
