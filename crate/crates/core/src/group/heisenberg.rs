use super::{Alphabet, GeneratorLabel, GroupModel, Letter};
use crate::graph::VertexKey;

/// The discrete Heisenberg group of upper unitriangular integer matrices
///
/// ```text
/// [1 m n]
/// [0 1 k]
/// [0 0 1]
/// ```
///
/// stored as `(m, n, k)`, with `(m,n,k)(m',n',k') = (m+m', n+n'+mk', k+k')`.
/// `a = (1,0,0)` and `b = (0,0,1)`; the extended model adds the central
/// `c = (0,1,0)`.
#[derive(Clone, Debug)]
pub struct Heisenberg {
    extended: bool,
    alphabet: Alphabet,
}

impl Heisenberg {
    pub fn standard() -> Self {
        Self::new(false)
    }

    pub fn extended() -> Self {
        Self::new(true)
    }

    pub fn new(extended: bool) -> Self {
        let syms: &[char] = if extended { &['a', 'b', 'c'] } else { &['a', 'b'] };
        Heisenberg {
            extended,
            alphabet: Alphabet::new(syms.iter().map(|&s| GeneratorLabel::standard(s)).collect())
                .expect("heisenberg alphabet"),
        }
    }

    pub fn key(m: i64, n: i64, k: i64) -> VertexKey {
        VertexKey::writer().i64(m).i64(n).i64(k).finish()
    }

    pub fn coords(g: &VertexKey) -> (i64, i64, i64) {
        let mut r = g.reader();
        let m = r.i64().expect("heisenberg key");
        let n = r.i64().expect("heisenberg key");
        let k = r.i64().expect("heisenberg key");
        (m, n, k)
    }

    pub fn multiply(x: (i64, i64, i64), y: (i64, i64, i64)) -> (i64, i64, i64) {
        (x.0 + y.0, x.1 + y.1 + x.0 * y.2, x.2 + y.2)
    }

    pub fn inverse(x: (i64, i64, i64)) -> (i64, i64, i64) {
        (-x.0, -x.1 + x.0 * x.2, -x.2)
    }
}

impl GroupModel for Heisenberg {
    fn name(&self) -> String {
        if self.extended {
            "heisenberg:extended".into()
        } else {
            "heisenberg:std".into()
        }
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> VertexKey {
        Heisenberg::key(0, 0, 0)
    }

    fn act(&self, g: &VertexKey, s: Letter) -> VertexKey {
        let (m, n, k) = Heisenberg::coords(g);
        let e = if self.alphabet.is_positive(s) { 1 } else { -1 };
        let (m, n, k) = match self.alphabet.generator_of(s) {
            0 => (m + e, n, k),
            1 => (m, n + e * m, k + e),
            _ => (m, n + e, k),
        };
        Heisenberg::key(m, n, k)
    }

    fn describe(&self, g: &VertexKey) -> String {
        let (m, n, k) = Heisenberg::coords(g);
        format!("[{m},{n},{k}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actions_are_right_multiplication() {
        let h = Heisenberg::extended();
        let gens = [(1, 0, 0), (0, 0, 1), (0, 1, 0)];
        let g = Heisenberg::key(2, -3, 5);
        for s in h.alphabet().letters() {
            let gen = gens[h.alphabet().generator_of(s)];
            let gen = if h.alphabet().is_positive(s) { gen } else { Heisenberg::inverse(gen) };
            let (m, n, k) = Heisenberg::multiply((2, -3, 5), gen);
            assert_eq!(h.act(&g, s), Heisenberg::key(m, n, k));
        }
    }

    #[test]
    fn commutator_is_central() {
        let h = Heisenberg::standard();
        assert_eq!(h.describe(&h.evaluate_str("abAB").unwrap()), "[0,1,0]");
    }
}
