use super::{Alphabet, GeneratorLabel, GroupModel, Letter};
use crate::graph::VertexKey;

/// `Z^d` with the standard basis `e_1..e_d` (letters `a, b, c, ...`).
/// Elements are integer vectors.
#[derive(Clone, Debug)]
pub struct Zd {
    dim: usize,
    alphabet: Alphabet,
}

impl Zd {
    pub fn new(dim: usize) -> Self {
        assert!((1..=8).contains(&dim), "dimension must be in 1..=8");
        Zd {
            dim,
            alphabet: Alphabet::standard(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn key(v: &[i64]) -> VertexKey {
        v.iter().fold(VertexKey::writer(), |w, &x| w.i64(x)).finish()
    }

    pub fn coords(&self, g: &VertexKey) -> Vec<i64> {
        let mut r = g.reader();
        (0..self.dim).map(|_| r.i64().expect("zd key")).collect()
    }
}

impl GroupModel for Zd {
    fn name(&self) -> String {
        format!("zd:{}", self.dim)
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> VertexKey {
        Zd::key(&vec![0; self.dim])
    }

    fn act(&self, g: &VertexKey, s: Letter) -> VertexKey {
        let mut v = self.coords(g);
        let axis = self.alphabet.generator_of(s);
        v[axis] += if self.alphabet.is_positive(s) { 1 } else { -1 };
        Zd::key(&v)
    }

    fn describe(&self, g: &VertexKey) -> String {
        let parts: Vec<String> = self.coords(g).iter().map(i64::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// The triangular lattice `Z[ω]`, `ω = e^{πi/3}`, generated by the six unit
/// vectors. Elements are coordinates `(x, y)` meaning `x + yω`; letters `a`,
/// `b`, `c` are `1`, `ω`, `ω² = ω - 1`.
#[derive(Clone, Debug)]
pub struct Hex {
    alphabet: Alphabet,
}

const HEX_STEPS: [(i64, i64); 3] = [(1, 0), (0, 1), (-1, 1)];

impl Default for Hex {
    fn default() -> Self {
        Self::new()
    }
}

impl Hex {
    pub fn new() -> Self {
        Hex {
            alphabet: Alphabet::new(['a', 'b', 'c'].map(GeneratorLabel::standard).to_vec())
                .expect("hex alphabet"),
        }
    }

    pub fn key(x: i64, y: i64) -> VertexKey {
        VertexKey::writer().i64(x).i64(y).finish()
    }

    pub fn coords(g: &VertexKey) -> (i64, i64) {
        let mut r = g.reader();
        (r.i64().expect("hex key"), r.i64().expect("hex key"))
    }

    /// Word length of `x + yω`.
    pub fn norm(x: i64, y: i64) -> u64 {
        if (x >= 0) == (y >= 0) {
            x.unsigned_abs() + y.unsigned_abs()
        } else {
            x.unsigned_abs().max(y.unsigned_abs())
        }
    }
}

impl GroupModel for Hex {
    fn name(&self) -> String {
        "hex".into()
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> VertexKey {
        Hex::key(0, 0)
    }

    fn act(&self, g: &VertexKey, s: Letter) -> VertexKey {
        let (x, y) = Hex::coords(g);
        let (dx, dy) = HEX_STEPS[self.alphabet.generator_of(s)];
        let sign = if self.alphabet.is_positive(s) { 1 } else { -1 };
        Hex::key(x + sign * dx, y + sign * dy)
    }

    fn describe(&self, g: &VertexKey) -> String {
        let (x, y) = Hex::coords(g);
        format!("({x},{y})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs, Limits, NeighborOracle};
    use crate::group::CayleyGraph;
    use std::sync::Arc;

    #[test]
    fn hex_distances_match_the_norm() {
        let g = CayleyGraph::new(Arc::new(Hex::new()));
        let f = bfs(&g, &g.origin(), 6, &Limits::default()).unwrap();
        for (k, d) in f.sorted_entries() {
            let (x, y) = Hex::coords(k);
            assert_eq!(Hex::norm(x, y), d as u64);
        }
        // 1 + 6 + 12 + ... + 36
        assert_eq!(f.len(), 1 + 3 * 6 * 7);
    }

    #[test]
    fn zd_words() {
        let z = Zd::new(3);
        assert_eq!(z.describe(&z.evaluate_str("aab^-3cA").unwrap()), "(1,-3,1)");
    }
}
