use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::{Limits, NeighborOracle, VertexKey};
use crate::error::{Error, Result};

/// Breadth-first distances from a source out to a radius, with the
/// predecessor lists of the geodesic DAG.
///
/// Every vertex at distance `< radius` has all of its neighbors present.
/// Vertices at distance exactly `radius` are present but not expanded.
#[derive(Clone, Debug)]
pub struct DistanceField {
    source: VertexKey,
    radius: u32,
    order: Vec<VertexKey>,
    dist: Vec<u32>,
    preds: Vec<SmallVec<[u32; 4]>>,
    index: FxHashMap<VertexKey, u32>,
    frontier_complete: bool,
}

impl DistanceField {
    pub fn source(&self) -> &VertexKey {
        &self.source
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// True when the search exhausted the connected component before
    /// reaching the radius, so the field holds every vertex of the graph.
    pub fn frontier_complete(&self) -> bool {
        self.frontier_complete
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn dist(&self, v: &VertexKey) -> Option<u32> {
        self.index.get(v).map(|&i| self.dist[i as usize])
    }

    pub fn contains(&self, v: &VertexKey) -> bool {
        self.index.contains_key(v)
    }

    /// Vertices in discovery order (non-decreasing distance).
    pub fn vertices(&self) -> impl Iterator<Item = &VertexKey> {
        self.order.iter()
    }

    pub fn index_of(&self, v: &VertexKey) -> Option<usize> {
        self.index.get(v).map(|&i| i as usize)
    }

    pub fn key_at(&self, i: usize) -> &VertexKey {
        &self.order[i]
    }

    pub fn dist_at(&self, i: usize) -> u32 {
        self.dist[i]
    }

    /// Indices of the neighbors of vertex `i` one step closer to the source.
    pub fn preds_at(&self, i: usize) -> &[u32] {
        &self.preds[i]
    }

    pub fn predecessors(&self, v: &VertexKey) -> Vec<&VertexKey> {
        match self.index_of(v) {
            Some(i) => self.preds[i]
                .iter()
                .map(|&p| &self.order[p as usize])
                .collect(),
            None => Vec::new(),
        }
    }

    /// Vertices at exactly distance `r`, sorted by key.
    pub fn sphere(&self, r: u32) -> Vec<&VertexKey> {
        let mut out: Vec<_> = self
            .order
            .iter()
            .zip(&self.dist)
            .filter(|(_, &d)| d == r)
            .map(|(k, _)| k)
            .collect();
        out.sort();
        out
    }

    /// `(key, distance)` for the whole field, sorted by key.
    pub fn sorted_entries(&self) -> Vec<(&VertexKey, u32)> {
        let mut out: Vec<_> = self.order.iter().zip(self.dist.iter().copied()).collect();
        out.sort_by(|a, b| a.0.cmp(b.0));
        out
    }

    /// Walks predecessor links back to the source, returning an explicit
    /// minimal path `source -> v` (smallest-key predecessor at every step).
    pub fn path_to(&self, v: &VertexKey) -> Option<Vec<VertexKey>> {
        let mut i = self.index_of(v)?;
        let mut path = vec![self.order[i].clone()];
        while self.dist[i] > 0 {
            i = self.preds[i]
                .iter()
                .map(|&p| p as usize)
                .min_by(|&a, &b| self.order[a].cmp(&self.order[b]))
                .expect("non-source vertex has a predecessor");
            path.push(self.order[i].clone());
        }
        path.reverse();
        Some(path)
    }
}

/// Exact breadth-first distances from `source` out to `radius`.
pub fn bfs(
    oracle: &dyn NeighborOracle,
    source: &VertexKey,
    radius: u32,
    limits: &Limits,
) -> Result<DistanceField> {
    run(oracle, source, radius, None, limits)
}

/// Exact `d(x, y)` when it is at most `cap`, `None` otherwise.
pub fn distance(
    oracle: &dyn NeighborOracle,
    x: &VertexKey,
    y: &VertexKey,
    cap: u32,
    limits: &Limits,
) -> Result<Option<u32>> {
    if x == y {
        return Ok(Some(0));
    }
    let field = run(oracle, x, cap, Some(y), limits)?;
    Ok(field.dist(y))
}

/// BFS that, when `target` is given, stops at the layer where the target
/// appears. The returned field then has radius `d(source, target)` and the
/// target's predecessor list is complete.
pub(crate) fn run(
    oracle: &dyn NeighborOracle,
    source: &VertexKey,
    radius: u32,
    target: Option<&VertexKey>,
    limits: &Limits,
) -> Result<DistanceField> {
    let mut field = DistanceField {
        source: source.clone(),
        radius,
        order: vec![source.clone()],
        dist: vec![0],
        preds: vec![SmallVec::new()],
        index: FxHashMap::default(),
        frontier_complete: false,
    };
    field.index.insert(source.clone(), 0);
    if target == Some(source) {
        field.radius = 0;
    }
    let mut queue = VecDeque::from([0u32]);
    let mut max_seen = 0;
    while let Some(i) = queue.pop_front() {
        let d = field.dist[i as usize];
        if d >= field.radius {
            continue;
        }
        let v = field.order[i as usize].clone();
        for w in oracle.neighbors(&v) {
            match field.index.get(&w) {
                Some(&j) => {
                    if field.dist[j as usize] == d + 1 {
                        field.preds[j as usize].push(i);
                    }
                }
                None => {
                    let j = field.order.len() as u32;
                    if field.order.len() >= limits.max_vertices {
                        return Err(Error::resource(
                            format!(
                                "distance field from {} at radius {}",
                                oracle.label(source),
                                field.radius
                            ),
                            limits.max_vertices,
                        ));
                    }
                    if target == Some(&w) {
                        field.radius = d + 1;
                    }
                    field.index.insert(w.clone(), j);
                    field.order.push(w);
                    field.dist.push(d + 1);
                    field.preds.push(SmallVec::from_slice(&[i]));
                    max_seen = max_seen.max(d + 1);
                    queue.push_back(j);
                }
            }
        }
    }
    field.frontier_complete = max_seen < field.radius;
    Ok(field)
}
