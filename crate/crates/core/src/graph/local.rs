use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{bfs, Limits, NeighborOracle, VertexKey};
use crate::error::{Error, Result};

const UNSEEN: u16 = u16::MAX;

/// All pairwise distances needed to test triples inside a ball.
///
/// For a ball `B` of radius `r` around a center, holds `d(q, p)` for every
/// `q` in `B` and every `p` within `r + 1` of the center (neighbors of ball
/// vertices). Geodesics between such points stay within `2r + 1` of the
/// center, so the distances are computed by BFS restricted to that region
/// and are exact.
pub struct LocalMetric {
    center: VertexKey,
    radius: u32,
    keys: Vec<VertexKey>,
    center_dist: Vec<u32>,
    index: FxHashMap<VertexKey, u32>,
    offsets: Vec<u32>,
    adjacency: Vec<u32>,
    ball_len: usize,
    near_len: usize,
    rows: Vec<u16>,
}

impl LocalMetric {
    pub fn new(
        oracle: &dyn NeighborOracle,
        center: &VertexKey,
        radius: u32,
        limits: &Limits,
    ) -> Result<Self> {
        let outer = 2 * radius + 1;
        if outer as usize >= UNSEEN as usize {
            return Err(Error::invalid("scan radius too large"));
        }
        let field = bfs(oracle, center, outer, limits)?;
        let keys: Vec<VertexKey> = field.vertices().cloned().collect();
        let center_dist: Vec<u32> = (0..keys.len()).map(|i| field.dist_at(i)).collect();
        let index: FxHashMap<VertexKey, u32> = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i as u32))
            .collect();
        let lists: Vec<Vec<u32>> = keys
            .par_iter()
            .map(|k| {
                oracle
                    .neighbors(k)
                    .iter()
                    .filter_map(|w| index.get(w).copied())
                    .collect()
            })
            .collect();
        let mut offsets = Vec::with_capacity(keys.len() + 1);
        let mut adjacency = Vec::new();
        offsets.push(0);
        for l in lists {
            adjacency.extend(l);
            offsets.push(adjacency.len() as u32);
        }
        let ball_len = center_dist.partition_point(|&d| d <= radius);
        let near_len = center_dist.partition_point(|&d| d <= radius + 1);
        let mut metric = LocalMetric {
            center: center.clone(),
            radius,
            keys,
            center_dist,
            index,
            offsets,
            adjacency,
            ball_len,
            near_len,
            rows: Vec::new(),
        };
        let rows: Vec<Vec<u16>> = (0..ball_len)
            .into_par_iter()
            .map(|q| metric.bfs_row(q, outer))
            .collect();
        metric.rows = rows.into_iter().flatten().collect();
        Ok(metric)
    }

    fn bfs_row(&self, source: usize, depth: u32) -> Vec<u16> {
        let mut dist = vec![UNSEEN; self.keys.len()];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = 0;
        queue.push_back(source as u32);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize];
            if d as u32 >= depth {
                continue;
            }
            for &w in self.neighbors(v as usize) {
                if dist[w as usize] == UNSEEN {
                    dist[w as usize] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        dist.truncate(self.near_len);
        debug_assert!(dist.iter().all(|&d| d != UNSEEN));
        dist
    }

    pub fn center(&self) -> &VertexKey {
        &self.center
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Number of ball vertices; they occupy indices `0..ball_len()`.
    pub fn ball_len(&self) -> usize {
        self.ball_len
    }

    /// Ball indices in canonical key order.
    pub fn sorted_ball(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.ball_len).collect();
        idx.sort_by(|&x, &y| self.keys[x].cmp(&self.keys[y]));
        idx
    }

    pub fn key(&self, i: usize) -> &VertexKey {
        &self.keys[i]
    }

    pub fn center_dist(&self, i: usize) -> u32 {
        self.center_dist[i]
    }

    pub fn index_of(&self, v: &VertexKey) -> Option<usize> {
        self.index.get(v).map(|&i| i as usize)
    }

    fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// `d(q, p)` for `q` in the ball and `p` within `radius + 1`.
    #[inline]
    pub fn d(&self, q: usize, p: usize) -> u32 {
        debug_assert!(q < self.ball_len && p < self.near_len);
        self.rows[q * self.near_len + p] as u32
    }

    /// Shared-tail test for ball vertices: some neighbor `z` of `c` is one
    /// step closer to both `a` and `b`.
    pub fn shares_tail(&self, a: usize, b: usize, c: usize) -> bool {
        let (da, db) = (self.d(a, c), self.d(b, c));
        if da == 0 || db == 0 {
            return false;
        }
        self.neighbors(c)
            .iter()
            .any(|&z| self.d(a, z as usize) + 1 == da && self.d(b, z as usize) + 1 == db)
    }

    /// Rigid-triple test for ball vertices: from each vertex, no first step
    /// lies on minimal paths to both other vertices.
    pub fn is_rigid(&self, x: usize, y: usize, z: usize) -> bool {
        !self.joins_at(x, y, z) && !self.joins_at(y, z, x) && !self.joins_at(z, x, y)
    }

    fn joins_at(&self, x: usize, y: usize, z: usize) -> bool {
        let (dy, dz) = (self.d(y, x), self.d(z, x));
        self.neighbors(x)
            .iter()
            .any(|&w| self.d(y, w as usize) + 1 == dy && self.d(z, w as usize) + 1 == dz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_rigid_triple, shares_tail, Ladder};
    use crate::group::{builtin_oracle, GraphDescriptor};

    fn check_against_definitions(oracle: &dyn NeighborOracle, center: &VertexKey, radius: u32) {
        let l = Limits::default();
        let m = LocalMetric::new(oracle, center, radius, &l).unwrap();
        let n = m.ball_len();
        for a in 0..n {
            for b in 0..n {
                let field = crate::graph::bfs(oracle, m.key(a), 2 * radius, &l).unwrap();
                assert_eq!(field.dist(m.key(b)), Some(m.d(a, b)));
                for c in 0..n {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let (ka, kb, kc) = (m.key(a), m.key(b), m.key(c));
                    assert_eq!(
                        m.shares_tail(a, b, c),
                        shares_tail(oracle, ka, kb, kc, 4 * radius, &l).unwrap()
                    );
                    if a < b && b < c {
                        assert_eq!(
                            m.is_rigid(a, b, c),
                            is_rigid_triple(oracle, ka, kb, kc, 4 * radius, &l).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fast_predicates_agree_with_definitions() {
        let g1 = Ladder::gamma1();
        check_against_definitions(&g1, &g1.origin(), 3);
        for name in ["hex", "free_product:2,3", "heisenberg:std"] {
            let g = builtin_oracle(&GraphDescriptor::parse(name).unwrap()).unwrap();
            check_against_definitions(&*g, &g.origin(), 2);
        }
    }
}
