use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::bfs::{run, DistanceField};
use super::{bfs, Limits, NeighborOracle, VertexKey};
use crate::error::{Error, Result};

/// A distance field together with exact counts of minimal paths from its
/// source to every vertex.
#[derive(Clone, Debug)]
pub struct GeodesicDag {
    field: DistanceField,
    counts: Vec<BigUint>,
}

impl GeodesicDag {
    pub fn new(field: DistanceField) -> Self {
        let mut counts = vec![BigUint::zero(); field.len()];
        if !counts.is_empty() {
            counts[0] = BigUint::one();
        }
        // discovery order has non-decreasing distance, so predecessors come first
        for i in 1..field.len() {
            let total = field
                .preds_at(i)
                .iter()
                .fold(BigUint::zero(), |acc, &p| acc + &counts[p as usize]);
            counts[i] = total;
        }
        GeodesicDag { field, counts }
    }

    pub fn field(&self) -> &DistanceField {
        &self.field
    }

    /// Number of minimal paths from the source to `v`, if `v` is in the field.
    pub fn count(&self, v: &VertexKey) -> Option<&BigUint> {
        self.field.index_of(v).map(|i| &self.counts[i])
    }
}

fn exceeds(oracle: &dyn NeighborOracle, a: &VertexKey, c: &VertexKey, cap: u32) -> Error {
    Error::ExceedsCap {
        from: oracle.label(a),
        to: oracle.label(c),
        cap,
    }
}

/// Field from `a` stopped at the layer of `c`; errors when `d(a,c) > cap`.
fn field_to(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    c: &VertexKey,
    cap: u32,
    limits: &Limits,
) -> Result<(DistanceField, u32)> {
    let field = run(oracle, a, cap, Some(c), limits)?;
    match field.dist(c) {
        Some(d) => Ok((field, d)),
        None => Err(exceeds(oracle, a, c, cap)),
    }
}

/// All vertices on at least one minimal path from `a` to `c`, sorted by key:
/// exactly the `v` with `d(a,v) + d(v,c) = d(a,c)`.
pub fn geodesic_vertices(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    c: &VertexKey,
    cap: u32,
    limits: &Limits,
) -> Result<Vec<VertexKey>> {
    let (from_a, d) = field_to(oracle, a, c, cap, limits)?;
    let from_c = bfs(oracle, c, d, limits)?;
    let mut out: Vec<VertexKey> = from_a
        .vertices()
        .filter(|v| match (from_a.dist(v), from_c.dist(v)) {
            (Some(x), Some(y)) => x + y == d,
            _ => false,
        })
        .cloned()
        .collect();
    out.sort();
    Ok(out)
}

/// Exact number of distinct minimal paths from `a` to `c`.
pub fn count_geodesics(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    c: &VertexKey,
    cap: u32,
    limits: &Limits,
) -> Result<BigUint> {
    let (field, _) = field_to(oracle, a, c, cap, limits)?;
    let dag = GeodesicDag::new(field);
    Ok(dag.count(c).cloned().expect("target is in its own field"))
}

/// Minimal paths returned by [`enumerate_geodesics`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicList {
    pub paths: Vec<Vec<VertexKey>>,
    /// Set when more minimal paths exist than were returned.
    pub truncated: bool,
    /// Total number of minimal paths.
    pub total: BigUint,
}

/// Up to `limit` minimal paths from `a` to `c`, in lexicographic order of
/// their vertex key sequences.
pub fn enumerate_geodesics(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    c: &VertexKey,
    cap: u32,
    limit: usize,
    limits: &Limits,
) -> Result<GeodesicList> {
    if limit == 0 {
        return Err(Error::invalid("enumeration limit must be at least 1"));
    }
    if limit > limits.max_enumeration {
        return Err(Error::resource("geodesic enumeration limit", limits.max_enumeration));
    }
    let (from_a, d) = field_to(oracle, a, c, cap, limits)?;
    let from_c = bfs(oracle, c, d, limits)?;
    let total = GeodesicDag::new(from_a.clone())
        .count(c)
        .cloned()
        .expect("target is in its own field");

    let successors = |v: &VertexKey| -> Vec<VertexKey> {
        let da = from_a.dist(v).expect("on a geodesic");
        let mut next: Vec<VertexKey> = oracle
            .neighbors(v)
            .into_iter()
            .filter(|w| from_a.dist(w) == Some(da + 1) && from_c.dist(w) == Some(d - da - 1))
            .collect();
        next.sort();
        next
    };

    if d == 0 {
        return Ok(GeodesicList {
            paths: vec![vec![a.clone()]],
            truncated: false,
            total,
        });
    }
    let mut paths = Vec::new();
    // depth-first with sorted successors yields lexicographic order
    let mut stack: Vec<(Vec<VertexKey>, usize)> = vec![(successors(a), 0)];
    let mut current = vec![a.clone()];
    while let Some((options, next)) = stack.last_mut() {
        if paths.len() >= limit || *next >= options.len() {
            stack.pop();
            current.pop();
            continue;
        }
        let w = options[*next].clone();
        *next += 1;
        current.push(w.clone());
        if current.len() as u32 == d + 1 {
            paths.push(current.clone());
            current.pop();
        } else {
            stack.push((successors(&w), 0));
        }
    }
    let truncated = total > BigUint::from(paths.len());
    Ok(GeodesicList {
        paths,
        truncated,
        total,
    })
}

/// Outcome of checking whether a vertex sequence is a geodesic path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathCheck {
    Geodesic,
    /// `d(path[i], path[j]) = distance < j - i`.
    NotGeodesic { i: usize, j: usize, distance: u32 },
    /// Entries `index` and `index + 1` are not adjacent.
    NotAPath { index: usize },
}

/// Checks `d(path[i], path[j]) = |i - j|` for all `i, j` by exact BFS.
pub fn check_path(
    oracle: &dyn NeighborOracle,
    path: &[VertexKey],
    limits: &Limits,
) -> Result<PathCheck> {
    for (index, w) in path.windows(2).enumerate() {
        if !oracle.neighbors(&w[0]).contains(&w[1]) {
            return Ok(PathCheck::NotAPath { index });
        }
    }
    let last = path.len().saturating_sub(1);
    for i in 0..path.len() {
        let field = bfs(oracle, &path[i], (last - i) as u32, limits)?;
        for (j, v) in path.iter().enumerate().skip(i + 1) {
            let dist = field.dist(v).expect("adjacent steps keep the path inside the field");
            if dist as usize != j - i {
                return Ok(PathCheck::NotGeodesic { i, j, distance: dist });
            }
        }
    }
    Ok(PathCheck::Geodesic)
}

/// True iff `path` is a path with `d(path[i], path[j]) = |i - j|`. A sequence
/// with non-adjacent consecutive entries is not a geodesic path.
pub fn is_geodesic_path(
    oracle: &dyn NeighborOracle,
    path: &[VertexKey],
    limits: &Limits,
) -> Result<bool> {
    Ok(check_path(oracle, path, limits)? == PathCheck::Geodesic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Ladder;
    use crate::group::{builtin_oracle, GraphDescriptor};

    fn oracle(name: &str) -> Box<dyn NeighborOracle> {
        builtin_oracle(&GraphDescriptor::parse(name).unwrap()).unwrap()
    }

    fn lattice(g: &dyn NeighborOracle, x: i64, y: i64) -> VertexKey {
        let mut w = String::new();
        for _ in 0..x.abs() {
            w.push(if x > 0 { 'a' } else { 'A' });
        }
        for _ in 0..y.abs() {
            w.push(if y > 0 { 'b' } else { 'B' });
        }
        g.resolve(if w.is_empty() { "e" } else { &w }).unwrap()
    }

    #[test]
    fn geodesic_vertices_of_trivial_pair() {
        let g = oracle("zd:2");
        let o = g.origin();
        assert_eq!(
            geodesic_vertices(&*g, &o, &o, 0, &Limits::default()).unwrap(),
            vec![o]
        );
    }

    #[test]
    fn lattice_box() {
        let g = oracle("zd:2");
        let set = geodesic_vertices(&*g, &g.origin(), &lattice(&*g, 2, 1), 5, &Limits::default())
            .unwrap();
        let mut expected: Vec<_> = (0..=2)
            .flat_map(|x| (0..=1).map(move |y| (x, y)))
            .map(|(x, y)| lattice(&*g, x, y))
            .collect();
        expected.sort();
        assert_eq!(set, expected);
    }

    #[test]
    fn gamma1_unique_geodesic() {
        let g = Ladder::gamma1();
        let a = g.resolve("(1,1)").unwrap();
        let c = g.resolve("(4,0)").unwrap();
        let l = Limits::default();
        let set = geodesic_vertices(&g, &a, &c, 6, &l).unwrap();
        let mut expected: Vec<_> = ["(1,1)", "(2,1)", "(3,1)", "(4,1)", "(4,0)"]
            .iter()
            .map(|s| g.resolve(s).unwrap())
            .collect();
        expected.sort();
        assert_eq!(set, expected);
        assert_eq!(count_geodesics(&g, &a, &c, 6, &l).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn counts_and_enumeration_in_the_lattice() {
        let g = oracle("zd:2");
        let o = g.origin();
        let l = Limits::default();
        assert_eq!(count_geodesics(&*g, &o, &o, 0, &l).unwrap(), BigUint::from(1u32));
        // binomial(4, 2)
        let c22 = lattice(&*g, 2, 2);
        assert_eq!(count_geodesics(&*g, &o, &c22, 6, &l).unwrap(), BigUint::from(6u32));
        let two = enumerate_geodesics(&*g, &o, &lattice(&*g, 1, 1), 4, 10, &l).unwrap();
        assert_eq!(two.paths.len(), 2);
        assert!(!two.truncated);
        let three = enumerate_geodesics(&*g, &o, &c22, 6, 3, &l).unwrap();
        assert_eq!(three.paths.len(), 3);
        assert!(three.truncated);
        assert_eq!(three.total, BigUint::from(6u32));
        let mut sorted = three.paths.clone();
        sorted.sort();
        assert_eq!(sorted, three.paths);
    }

    #[test]
    fn trees_have_one_geodesic() {
        let g = oracle("free:2");
        let a = g.resolve("ab").unwrap();
        let c = g.resolve("BAba").unwrap();
        let list = enumerate_geodesics(&*g, &a, &c, 10, 10, &Limits::default()).unwrap();
        assert_eq!(list.paths.len(), 1);
        assert_eq!(list.paths[0].len(), 7);
    }

    #[test]
    fn enumeration_limit_is_capped() {
        let g = oracle("zd:2");
        let o = g.origin();
        let l = Limits {
            max_enumeration: 5,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_geodesics(&*g, &o, &o, 0, 6, &l),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(enumerate_geodesics(&*g, &o, &o, 0, 0, &l).is_err());
    }

    #[test]
    fn exceeding_cap_is_reported() {
        let g = oracle("zd:2");
        let far = lattice(&*g, 3, 3);
        assert!(matches!(
            geodesic_vertices(&*g, &g.origin(), &far, 5, &Limits::default()),
            Err(Error::ExceedsCap { cap: 5, .. })
        ));
    }

    #[test]
    fn path_checks_on_gamma1() {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let v = |s: &str| g.resolve(s).unwrap();
        assert!(is_geodesic_path(&g, &[v("(3,0)")], &l).unwrap());
        let row: Vec<_> = (1..=8).map(|n| v(&format!("({n},1)"))).collect();
        assert!(is_geodesic_path(&g, &row, &l).unwrap());
        let bad = [v("(1,1)"), v("(1,0)"), v("(2,0)")];
        assert_eq!(check_path(&g, &bad, &l).unwrap(), PathCheck::NotAPath { index: 1 });
        assert!(!is_geodesic_path(&g, &bad, &l).unwrap());
        // a detour through row 0 is a path but not a geodesic
        let detour = [v("(1,1)"), v("(1,0)"), v("(1,-1)"), v("(2,-1)"), v("(2,0)"), v("(2,1)")];
        assert_eq!(
            check_path(&g, &detour, &l).unwrap(),
            PathCheck::NotGeodesic { i: 0, j: 4, distance: 2 }
        );
    }
}
