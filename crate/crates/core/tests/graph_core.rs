use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use horobound::graph::{
    bfs, check_path, count_geodesics, enumerate_geodesics, is_rigid_triple, shares_tail,
    FiniteGraph, FiniteGraphDoc, Ladder, Limits, NeighborOracle, PathCheck, VertexKey,
};

/// A connected graph: a random spanning tree plus random extra edges.
fn connected_graph() -> impl Strategy<Value = FiniteGraphDoc> {
    (3usize..11)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
            (Just(n), parents, prop::collection::vec((0..n, 0..n), 0..2 * n))
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges = BTreeSet::new();
            for (i, p) in parents.into_iter().enumerate() {
                edges.insert((p, i + 1));
            }
            for (x, y) in extra {
                if x != y {
                    edges.insert((x.min(y), x.max(y)));
                }
            }
            FiniteGraphDoc {
                vertices: (0..n).map(|i| format!("v{i}")).collect(),
                edges: edges.into_iter().map(|(x, y)| [x, y]).collect(),
            }
        })
}

fn floyd_warshall(doc: &FiniteGraphDoc) -> Vec<Vec<u32>> {
    let n = doc.vertices.len();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &[x, y] in &doc.edges {
        d[x][y] = 1;
        d[y][x] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d
}

/// Walks of each length from `a`, by repeated adjacency products.
fn walk_counts(doc: &FiniteGraphDoc, a: usize, max_len: usize) -> Vec<Vec<u64>> {
    let n = doc.vertices.len();
    let mut out = vec![vec![0u64; n]];
    out[0][a] = 1;
    for _ in 0..max_len {
        let prev = out.last().unwrap();
        let mut next = vec![0u64; n];
        for &[x, y] in &doc.edges {
            next[y] += prev[x];
            next[x] += prev[y];
        }
        out.push(next);
    }
    out
}

fn key(g: &FiniteGraph, i: usize) -> VertexKey {
    g.resolve(&format!("v{i}")).unwrap()
}

/// All minimal paths from `x` to `y`, from an explicit listing.
fn path_vertices(g: &FiniteGraph, x: &VertexKey, y: &VertexKey) -> Vec<Vec<VertexKey>> {
    enumerate_geodesics(g, x, y, 64, 10_000, &Limits::default()).unwrap().paths
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn bfs_distances_match_floyd_warshall(doc in connected_graph()) {
        let g = FiniteGraph::from_doc("g", &doc).unwrap();
        let d = floyd_warshall(&doc);
        for a in 0..doc.vertices.len() {
            let f = bfs(&g, &key(&g, a), 64, &Limits::default()).unwrap();
            prop_assert!(f.frontier_complete());
            for b in 0..doc.vertices.len() {
                prop_assert_eq!(f.dist(&key(&g, b)), Some(d[a][b]));
            }
        }
    }

    #[test]
    fn geodesic_counts_match_walk_counts(doc in connected_graph()) {
        let g = FiniteGraph::from_doc("g", &doc).unwrap();
        let d = floyd_warshall(&doc);
        let n = doc.vertices.len();
        let l = Limits::default();
        for a in 0..n {
            let walks = walk_counts(&doc, a, n);
            for c in 0..n {
                let want = walks[d[a][c] as usize][c];
                let (ka, kc) = (key(&g, a), key(&g, c));
                prop_assert_eq!(count_geodesics(&g, &ka, &kc, 64, &l).unwrap(), BigUint::from(want));
                let list = enumerate_geodesics(&g, &ka, &kc, 64, 10_000, &l).unwrap();
                prop_assert_eq!(list.paths.len() as u64, want);
                prop_assert!(!list.truncated);
                prop_assert!(list.paths.windows(2).all(|w| w[0] < w[1]));
                for p in &list.paths {
                    prop_assert_eq!(check_path(&g, p, &l).unwrap(), PathCheck::Geodesic);
                }
            }
        }
    }

    #[test]
    fn triple_predicates_match_their_definitions(doc in connected_graph(), pick in any::<[prop::sample::Index; 3]>()) {
        let g = FiniteGraph::from_doc("g", &doc).unwrap();
        let n = doc.vertices.len();
        let idx: Vec<usize> = pick.iter().map(|i| i.index(n)).collect();
        prop_assume!(idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2]);
        let (a, b, c) = (key(&g, idx[0]), key(&g, idx[1]), key(&g, idx[2]));
        let l = Limits::default();

        // shared tail: some path from a and some path from b have the same
        // last edge into c
        let last = |ps: Vec<Vec<VertexKey>>| -> BTreeSet<VertexKey> {
            ps.into_iter().map(|p| p[p.len() - 2].clone()).collect()
        };
        let tail = !last(path_vertices(&g, &a, &c)).is_disjoint(&last(path_vertices(&g, &b, &c)));
        prop_assert_eq!(shares_tail(&g, &a, &b, &c, 64, &l).unwrap(), tail);

        let meet = |x: &VertexKey, y: &VertexKey, z: &VertexKey| -> bool {
            let on = |ps: Vec<Vec<VertexKey>>| -> BTreeSet<VertexKey> {
                ps.into_iter().flat_map(|p| p.into_iter().skip(1)).collect()
            };
            !on(path_vertices(&g, x, y)).is_disjoint(&on(path_vertices(&g, x, z)))
        };
        let rigid = !meet(&a, &b, &c) && !meet(&b, &c, &a) && !meet(&c, &a, &b);
        prop_assert_eq!(is_rigid_triple(&g, &a, &b, &c, 64, &l).unwrap(), rigid);
        if rigid {
            prop_assert!(!shares_tail(&g, &a, &b, &c, 64, &l).unwrap());
            prop_assert!(!shares_tail(&g, &b, &c, &a, 64, &l).unwrap());
            prop_assert!(!shares_tail(&g, &c, &a, &b, 64, &l).unwrap());
        }
    }

    #[test]
    fn broken_paths_are_reported(doc in connected_graph()) {
        let g = FiniteGraph::from_doc("g", &doc).unwrap();
        let n = doc.vertices.len();
        let edges: BTreeSet<(usize, usize)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        let non_edge = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).find(|p| !edges.contains(p));
        if let Some((x, y)) = non_edge {
            let path = [key(&g, x), key(&g, y)];
            prop_assert_eq!(check_path(&g, &path, &Limits::default()).unwrap(), PathCheck::NotAPath { index: 0 });
        }
    }

    #[test]
    fn key_encoding_preserves_order(x in any::<(i64, i64)>(), y in any::<(i64, i64)>()) {
        let k = |p: (i64, i64)| VertexKey::writer().i64(p.0).i64(p.1).finish();
        prop_assert_eq!(k(x).cmp(&k(y)), x.cmp(&y));
        let kx = k(x);
        prop_assert_eq!(VertexKey::from_hex(&kx.to_hex()).unwrap(), kx.clone());
        let mut r = kx.reader();
        prop_assert_eq!((r.i64().unwrap(), r.i64().unwrap()), x);
    }

    #[test]
    fn ladder_distances_have_a_closed_form(k in 1i64..30, j in -1i64..=1, l in 1i64..30, i in -1i64..=1) {
        // rows +-1 are paths, row 0 only has rungs
        let expected = |(k, j): (i64, i64), (l, i): (i64, i64)| -> i64 {
            match (j, i) {
                (0, 0) if k == l => 0,
                (0, 0) => (k - l).abs() + 2,
                (0, _) | (_, 0) => (k - l).abs() + 1,
                (a, b) if a == b => (k - l).abs(),
                _ => (k - l).abs() + 2,
            }
        };
        let g = Ladder::gamma1();
        let f = bfs(&g, &Ladder::vertex(k, j), 80, &Limits::default()).unwrap();
        prop_assert_eq!(f.dist(&Ladder::vertex(l, i)), Some(expected((k, j), (l, i)) as u32));
    }
}

#[test]
fn resource_caps_are_errors() {
    let g = Ladder::gamma2();
    let limits = Limits {
        max_vertices: 10,
        max_enumeration: 2,
    };
    let e = bfs(&g, &g.origin(), 20, &limits).unwrap_err();
    assert_eq!(e.exit_code(), 3);
    let zd = horobound::group::builtin_oracle(&horobound::group::GraphDescriptor::parse("zd:2").unwrap()).unwrap();
    let far = zd.resolve("aaabbb").unwrap();
    let list = enumerate_geodesics(&*zd, &zd.origin(), &far, 10, 5, &limits);
    assert!(list.is_err() || list.unwrap().truncated);
}
