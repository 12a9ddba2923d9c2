use super::{NeighborOracle, VertexKey};
use crate::error::{Error, Result};

/// The three-row ladder on `{1, 2, ...} x {-1, 0, 1}`.
///
/// Rows `1` and `-1` are paths; each `(k, 0)` is joined to `(k, 1)` and
/// `(k, -1)`. Without rungs along row 0 this is `gamma1`, whose boundary has
/// a non-Busemann point; adding the edges `(k,0)-(k+1,0)` gives `gamma2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ladder {
    middle_row_edges: bool,
}

impl Ladder {
    pub fn gamma1() -> Self {
        Ladder {
            middle_row_edges: false,
        }
    }

    pub fn gamma2() -> Self {
        Ladder {
            middle_row_edges: true,
        }
    }

    pub fn vertex(k: i64, j: i64) -> VertexKey {
        VertexKey::writer().i64(k).i64(j).finish()
    }

    pub fn coords(v: &VertexKey) -> (i64, i64) {
        let mut r = v.reader();
        let k = r.i64().expect("ladder key");
        let j = r.i64().expect("ladder key");
        (k, j)
    }
}

impl NeighborOracle for Ladder {
    fn descriptor(&self) -> String {
        if self.middle_row_edges {
            "gamma2".into()
        } else {
            "gamma1".into()
        }
    }

    fn origin(&self) -> VertexKey {
        Ladder::vertex(1, 0)
    }

    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let (k, j) = Ladder::coords(v);
        let mut out = Vec::with_capacity(4);
        if j != 0 || self.middle_row_edges {
            if k > 1 {
                out.push(Ladder::vertex(k - 1, j));
            }
            out.push(Ladder::vertex(k + 1, j));
        }
        if j == 0 {
            out.push(Ladder::vertex(k, 1));
            out.push(Ladder::vertex(k, -1));
        } else {
            out.push(Ladder::vertex(k, 0));
        }
        out
    }

    fn valence_bound(&self) -> Option<usize> {
        Some(if self.middle_row_edges { 4 } else { 3 })
    }

    fn label(&self, v: &VertexKey) -> String {
        let (k, j) = Ladder::coords(v);
        format!("({k},{j})")
    }

    fn resolve(&self, text: &str) -> Result<VertexKey> {
        let bad = || Error::UnknownVertex(format!("{text:?} is not a ladder vertex (k,j)"));
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (k, j) = inner.split_once(',').ok_or_else(bad)?;
        let k: i64 = k.trim().parse().map_err(|_| bad())?;
        let j: i64 = j.trim().parse().map_err(|_| bad())?;
        if k < 1 || !(-1..=1).contains(&j) {
            return Err(bad());
        }
        Ok(Ladder::vertex(k, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_oracle_contract, Limits};

    #[test]
    fn adjacency_matches_the_picture() {
        let g = Ladder::gamma1();
        let names = |v: &str| -> Vec<String> {
            g.neighbors(&g.resolve(v).unwrap())
                .iter()
                .map(|w| g.label(w))
                .collect()
        };
        assert_eq!(names("(1,1)"), ["(2,1)", "(1,0)"]);
        assert_eq!(names("(3,0)"), ["(3,1)", "(3,-1)"]);
        assert_eq!(names("(3,-1)"), ["(2,-1)", "(4,-1)", "(3,0)"]);
        let g2 = Ladder::gamma2();
        assert_eq!(g2.neighbors(&Ladder::vertex(3, 0)).len(), 4);
    }

    #[test]
    fn contract_holds() {
        for g in [Ladder::gamma1(), Ladder::gamma2()] {
            check_oracle_contract(&g, &g.origin(), 8, &Limits::default()).unwrap();
        }
    }

    #[test]
    fn resolve_rejects_missing_vertices() {
        let g = Ladder::gamma1();
        assert!(g.resolve("(0,0)").is_err());
        assert!(g.resolve("(-1,1)").is_err());
        assert!(g.resolve("(2,2)").is_err());
        assert_eq!(g.resolve(" ( 2 , -1 ) ").unwrap(), Ladder::vertex(2, -1));
    }
}
