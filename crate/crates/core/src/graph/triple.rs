use serde::{Deserialize, Serialize};

use super::geodesic::geodesic_vertices;
use super::{distance, Limits, NeighborOracle, VertexKey, VertexRef};
use crate::error::{Error, Result};

/// Three distinct vertices with their pairwise distances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub a: VertexRef,
    pub b: VertexRef,
    pub c: VertexRef,
    pub dab: u32,
    pub dbc: u32,
    pub dca: u32,
    pub perimeter: u32,
}

impl Triple {
    pub fn new(a: VertexRef, b: VertexRef, c: VertexRef, dab: u32, dbc: u32, dca: u32) -> Self {
        Triple {
            a,
            b,
            c,
            dab,
            dbc,
            dca,
            perimeter: dab + dbc + dca,
        }
    }

    pub fn min_side(&self) -> u32 {
        self.dab.min(self.dbc).min(self.dca)
    }

    pub fn max_side(&self) -> u32 {
        self.dab.max(self.dbc).max(self.dca)
    }

    /// Checks the stored invariants: distinct vertices, perimeter sum and
    /// the triangle inequality.
    pub fn is_consistent(&self) -> bool {
        let distinct = self.a != self.b && self.b != self.c && self.a != self.c;
        let (x, y, z) = (self.dab, self.dbc, self.dca);
        distinct
            && self.perimeter == x + y + z
            && x <= y + z
            && y <= x + z
            && z <= x + y
    }
}

pub(crate) fn ensure_distinct(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    b: &VertexKey,
    c: &VertexKey,
) -> Result<()> {
    if a == b || b == c || a == c {
        return Err(Error::Degenerate(format!(
            "triple {{{}, {}, {}}} repeats a vertex",
            oracle.label(a),
            oracle.label(b),
            oracle.label(c)
        )));
    }
    Ok(())
}

fn dist_or_cap(
    oracle: &dyn NeighborOracle,
    x: &VertexKey,
    y: &VertexKey,
    cap: u32,
    limits: &Limits,
) -> Result<u32> {
    distance(oracle, x, y, cap, limits)?.ok_or_else(|| Error::ExceedsCap {
        from: oracle.label(x),
        to: oracle.label(y),
        cap,
    })
}

/// Builds a [`Triple`] with exact pairwise distances.
pub fn make_triple(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    b: &VertexKey,
    c: &VertexKey,
    cap: u32,
    limits: &Limits,
) -> Result<Triple> {
    ensure_distinct(oracle, a, b, c)?;
    let dab = dist_or_cap(oracle, a, b, cap, limits)?;
    let dbc = dist_or_cap(oracle, b, c, cap, limits)?;
    let dca = dist_or_cap(oracle, c, a, cap, limits)?;
    Ok(Triple::new(
        oracle.vertex_ref(a),
        oracle.vertex_ref(b),
        oracle.vertex_ref(c),
        dab,
        dbc,
        dca,
    ))
}

/// True iff some minimal path `a -> c` and some minimal path `b -> c`
/// coincide on a final segment of at least one edge, i.e. some `z != c` lies
/// on geodesics from both `a` and `b` to `c`.
pub fn shares_tail(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    b: &VertexKey,
    c: &VertexKey,
    cap: u32,
    limits: &Limits,
) -> Result<bool> {
    ensure_distinct(oracle, a, b, c)?;
    let from_a = geodesic_vertices(oracle, a, c, cap, limits)?;
    let from_b = geodesic_vertices(oracle, b, c, cap, limits)?;
    let shared = sorted_intersection(&from_a, &from_b).any(|z| z != c);
    Ok(shared)
}

/// True iff for each vertex `x` of the triple, with `y`, `z` the other two,
/// the only vertex on both a minimal path `[x,y]` and a minimal path `[x,z]`
/// is `x` itself.
pub fn is_rigid_triple(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    b: &VertexKey,
    c: &VertexKey,
    cap: u32,
    limits: &Limits,
) -> Result<bool> {
    ensure_distinct(oracle, a, b, c)?;
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        let to_y = geodesic_vertices(oracle, x, y, cap, limits)?;
        let to_z = geodesic_vertices(oracle, x, z, cap, limits)?;
        if sorted_intersection(&to_y, &to_z).any(|v| v != x) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sorted_intersection<'a>(
    xs: &'a [VertexKey],
    ys: &'a [VertexKey],
) -> impl Iterator<Item = &'a VertexKey> + 'a {
    xs.iter().filter(move |x| ys.binary_search(x).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Ladder;
    use crate::group::{builtin_oracle, GraphDescriptor};

    fn oracle(name: &str) -> Box<dyn NeighborOracle> {
        builtin_oracle(&GraphDescriptor::parse(name).unwrap()).unwrap()
    }

    #[test]
    fn collinear_points_share_a_tail() {
        let g = oracle("zd:1");
        let l = Limits::default();
        let (a, b, c) = (g.resolve("e").unwrap(), g.resolve("a").unwrap(), g.resolve("aaaaa").unwrap());
        assert!(shares_tail(&*g, &a, &b, &c, 10, &l).unwrap());
    }

    #[test]
    fn gamma1_row_zero_has_no_common_tail() {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let a = g.resolve("(1,1)").unwrap();
        let b = g.resolve("(1,-1)").unwrap();
        for n in 2..=9 {
            let c = g.resolve(&format!("({n},0)")).unwrap();
            assert!(!shares_tail(&g, &a, &b, &c, 20, &l).unwrap(), "n = {n}");
            assert!(is_rigid_triple(&g, &a, &c, &b, 20, &l).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn gamma2_row_zero_shares_tails() {
        let g = Ladder::gamma2();
        let l = Limits::default();
        let a = g.resolve("(1,1)").unwrap();
        let b = g.resolve("(1,-1)").unwrap();
        for n in 3..=9 {
            let c = g.resolve(&format!("({n},0)")).unwrap();
            assert!(shares_tail(&g, &a, &b, &c, 20, &l).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn hex_equilateral_triple_is_rigid() {
        let g = oracle("hex");
        let l = Limits::default();
        let (o, k, kw) = (g.origin(), g.resolve("aa").unwrap(), g.resolve("bb").unwrap());
        assert!(is_rigid_triple(&*g, &o, &k, &kw, 10, &l).unwrap());
        let t = make_triple(&*g, &o, &k, &kw, 10, &l).unwrap();
        assert_eq!(t.perimeter, 6);
    }

    #[test]
    fn triple_perimeters() {
        let l = Limits::default();
        let g = Ladder::gamma1();
        let t = make_triple(
            &g,
            &g.resolve("(1,1)").unwrap(),
            &g.resolve("(1,-1)").unwrap(),
            &g.resolve("(5,0)").unwrap(),
            20,
            &l,
        )
        .unwrap();
        assert_eq!(t.perimeter, 12);
        assert!(t.is_consistent());

        let z = oracle("zd:2");
        let t = make_triple(&*z, &z.origin(), &z.resolve("a").unwrap(), &z.resolve("b").unwrap(), 5, &l)
            .unwrap();
        assert_eq!(t.perimeter, 4);
    }

    #[test]
    fn repeated_vertices_are_rejected() {
        let g = oracle("zd:2");
        let o = g.origin();
        let a = g.resolve("a").unwrap();
        let l = Limits::default();
        assert!(matches!(make_triple(&*g, &o, &a, &o, 5, &l), Err(Error::Degenerate(_))));
        assert!(matches!(shares_tail(&*g, &o, &o, &a, 5, &l), Err(Error::Degenerate(_))));
        assert!(matches!(is_rigid_triple(&*g, &a, &a, &o, 5, &l), Err(Error::Degenerate(_))));
    }
}
