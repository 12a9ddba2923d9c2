use num_rational::Ratio;
use proptest::prelude::*;

use horobound::boundary::{
    almost_geodesic_check, extend_ray, fingerprint_of, fingerprints, lipschitz_ratio,
    nonbusemann_witness, parse_epsilon, rigid_scan, tail_bound_trend, verify_certificate,
    weakly_geodesic_check, GeodesicRay, Trend, WitnessOutcome,
};
use horobound::graph::{bfs, is_rigid_triple, shares_tail, Ladder, Limits, NeighborOracle};
use horobound::group::{builtin_oracle, GraphDescriptor};

fn oracle(name: &str) -> Box<dyn NeighborOracle> {
    builtin_oracle(&GraphDescriptor::parse(name).unwrap()).unwrap()
}

const GRAPHS: &[&str] = &["gamma1", "gamma2", "zd:2", "hex", "free_product:2,3", "heisenberg:std"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fingerprint_values_are_bounded_by_probe_distance(
        g in prop::sample::select(GRAPHS),
        r_test in 1u32..3,
        gap in 1u32..4,
    ) {
        let g = oracle(g);
        let l = Limits::default();
        let base = g.origin();
        let census = fingerprints(&*g, &base, r_test, &[r_test + gap, r_test + gap + 1], &l).unwrap();
        let from_base = bfs(&*g, &base, r_test, &l).unwrap();
        for class in &census.classes {
            for (p, v) in census.probes.iter().zip(&class.values) {
                prop_assert!(v.unsigned_abs() <= from_base.dist(&p.key).unwrap() as u64);
            }
        }
        let total: usize = census.classes.iter().flat_map(|c| c.witnesses.values()).map(Vec::len).sum();
        let annuli: usize = census.annuli.iter().map(|&r| bfs(&*g, &base, r, &l).unwrap().sphere(r).len()).sum();
        prop_assert_eq!(total, annuli);
    }

    #[test]
    fn fingerprints_increase_along_geodesics(
        g in prop::sample::select(&["zd:2", "hex", "heisenberg:std"][..]),
        start in "[abAB]{1,3}",
        steps in 2u32..6,
    ) {
        let g = oracle(g);
        let l = Limits::default();
        let base = g.origin();
        let first = g.resolve(&start).unwrap();
        prop_assume!(first != base);
        let path = bfs(&*g, &base, 8, &l).unwrap().path_to(&first).unwrap();
        // Heisenberg balls have dead ends, which stop a ray early
        let ray = extend_ray(&*g, &GeodesicRay::verify(&*g, &path, &l).unwrap(), steps, &l);
        prop_assume!(ray.is_ok());
        let ray = ray.unwrap();
        let prints: Vec<Vec<i64>> = ray
            .keys()
            .iter()
            .map(|w| fingerprint_of(&*g, &base, 2, w, &l).unwrap().values)
            .collect();
        for pair in prints.windows(2) {
            prop_assert!(pair[0].iter().zip(&pair[1]).all(|(x, y)| x <= y));
        }
        // probes sit within distance 2, so values should settle after t = 4;
        // an exception is reported, not failed
        let last = prints.last().unwrap();
        if let Some(t) = (5..prints.len()).find(|&t| &prints[t] != last) {
            eprintln!("fingerprint still moving at t = {t} along {:?}", ray.keys().last());
        }
        let eps = Ratio::new(1, 2);
        prop_assert!(almost_geodesic_check(&*g, &ray.keys(), &eps, 0, &l).unwrap().holds);
    }

    #[test]
    fn ladder_certificates_verify_and_forgeries_do_not(radius in 5u32..14, count in 2usize..5) {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let (a, b) = (g.resolve("(1,1)").unwrap(), g.resolve("(1,-1)").unwrap());
        let WitnessOutcome::Certificate(cert) = nonbusemann_witness(&g, &a, &b, radius, count, &l).unwrap() else {
            panic!("gamma1 always has a certificate");
        };
        prop_assert_eq!(cert.triples.len(), count);
        verify_certificate(&g, &cert, &l).unwrap();
        for t in &cert.triples {
            prop_assert!(!shares_tail(&g, &a, &b, &t.c.key, 64, &l).unwrap());
        }
        let mut forged = cert.clone();
        forged.triples[0].perimeter += 1;
        prop_assert!(verify_certificate(&g, &forged, &l).is_err());
        let mut wrong_graph = cert.clone();
        wrong_graph.graph = "gamma2".into();
        prop_assert!(verify_certificate(&Ladder::gamma2(), &wrong_graph, &l).is_err());
    }
}

#[test]
fn rigid_scans_only_report_rigid_triples() {
    let l = Limits::default();
    for name in ["hex", "heisenberg:std", "free_product:2,3", "gamma1"] {
        let g = oracle(name);
        let scan = rigid_scan(&*g, &g.origin(), 2, None, &l).unwrap();
        for t in &scan.triples {
            let (a, b, c) = (&t.a.key, &t.b.key, &t.c.key);
            assert!(a < b && b < c, "{name}: triple not sorted");
            assert!(is_rigid_triple(&*g, a, b, c, 16, &l).unwrap(), "{name}");
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                assert!(!shares_tail(&*g, x, y, z, 16, &l).unwrap(), "{name}: rigid triple with a tail");
            }
        }
    }
}

#[test]
fn scans_do_not_depend_on_the_worker_count() {
    let g = oracle("heisenberg:std");
    let l = Limits::default();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let scan = rigid_scan(&*g, &g.origin(), 3, None, &l).unwrap();
            let census = fingerprints(&*g, &g.origin(), 2, &[4, 5], &l).unwrap();
            serde_json::to_string(&(scan, census)).unwrap()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn tail_bounds_grow_on_gamma1_and_stagnate_on_gamma2() {
    let l = Limits::default();
    for (g, want) in [(Ladder::gamma1(), Trend::Growth), (Ladder::gamma2(), Trend::Stagnation)] {
        let (a, b) = (g.resolve("(1,1)").unwrap(), g.resolve("(1,-1)").unwrap());
        assert_eq!(tail_bound_trend(&g, &a, &b, (6, 10), &l).unwrap().trend, want);
    }
}

#[test]
fn the_row_zero_sequence_is_weakly_but_not_almost_geodesic() {
    let g = Ladder::gamma1();
    let l = Limits::default();
    let mut seq = vec![g.resolve("(1,1)").unwrap()];
    seq.extend((1..=12).map(|n| Ladder::vertex(n, 0)));
    let probes: Vec<_> = bfs(&g, &g.origin(), 3, &l).unwrap().vertices().cloned().collect();
    let eps = parse_epsilon("5/2").unwrap();
    assert!(weakly_geodesic_check(&g, &seq, &probes, &eps, 2, &l).unwrap().holds);
    let tight = parse_epsilon("0.5").unwrap();
    let almost = almost_geodesic_check(&g, &seq, &tight, 2, &l).unwrap();
    assert!(!almost.holds);
    assert!(almost.violation.is_some());
}

#[test]
fn lipschitz_ratio_of_a_graph_with_itself_is_one() {
    let g = Ladder::gamma2();
    let r = lipschitz_ratio(&g, &g, 6, &Limits::default()).unwrap();
    assert_eq!((r.b_over_a, r.a_over_b), (Ratio::from_integer(1), Ratio::from_integer(1)));
}
