use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    bfs, distance, geodesic_vertices, make_triple, shares_tail, DistanceField, Limits,
    LocalMetric, NeighborOracle, Triple, VertexKey, VertexRef,
};

/// Largest perimeter seen for one side length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideBound {
    pub side: u32,
    pub count: usize,
    pub max_perimeter: u32,
}

/// All rigid triples inside a ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidScan {
    pub center: VertexRef,
    pub radius: u32,
    pub side_cap: Option<u32>,
    pub ball_size: usize,
    /// Sorted by the keys of `(a, b, c)`, with `a < b < c`.
    pub triples: Vec<Triple>,
    /// `P(n)`: rigid triples grouped by their shortest side.
    pub by_min_side: Vec<SideBound>,
}

fn side_bounds(triples: &[Triple], side: impl Fn(&Triple) -> Vec<u32>) -> Vec<SideBound> {
    let mut map: BTreeMap<u32, (usize, u32)> = BTreeMap::new();
    for t in triples {
        let mut sides = side(t);
        sides.sort_unstable();
        sides.dedup();
        for s in sides {
            let e = map.entry(s).or_default();
            e.0 += 1;
            e.1 = e.1.max(t.perimeter);
        }
    }
    map.into_iter()
        .map(|(side, (count, max_perimeter))| SideBound {
            side,
            count,
            max_perimeter,
        })
        .collect()
}

fn local_triple(oracle: &dyn NeighborOracle, m: &LocalMetric, a: usize, b: usize, c: usize) -> Triple {
    Triple::new(
        oracle.vertex_ref(m.key(a)),
        oracle.vertex_ref(m.key(b)),
        oracle.vertex_ref(m.key(c)),
        m.d(a, b),
        m.d(b, c),
        m.d(c, a),
    )
}

/// Finds every rigid triple with all three vertices within `radius` of
/// `center` and shortest side at most `side_cap`.
pub fn rigid_scan(
    oracle: &dyn NeighborOracle,
    center: &VertexKey,
    radius: u32,
    side_cap: Option<u32>,
    limits: &Limits,
) -> Result<RigidScan> {
    if radius == 0 {
        return Err(Error::invalid("rigid scan radius must be at least 1"));
    }
    let m = LocalMetric::new(oracle, center, radius, limits)?;
    let order = m.sorted_ball();
    let cap = side_cap.unwrap_or(u32::MAX);
    let found: Vec<(usize, usize, usize)> = (0..order.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            let a = order[i];
            for j in i + 1..order.len() {
                let b = order[j];
                let dab = m.d(a, b);
                for &c in &order[j + 1..] {
                    if dab.min(m.d(b, c)).min(m.d(a, c)) <= cap && m.is_rigid(a, b, c) {
                        out.push((a, b, c));
                    }
                }
            }
            out.into_iter()
        })
        .collect();
    let triples: Vec<Triple> = found
        .into_iter()
        .map(|(a, b, c)| local_triple(oracle, &m, a, b, c))
        .collect();
    let by_min_side = side_bounds(&triples, |t| vec![t.min_side()]);
    Ok(RigidScan {
        center: oracle.vertex_ref(center),
        radius,
        side_cap,
        ball_size: m.ball_len(),
        triples,
        by_min_side,
    })
}

/// Result of checking the paths-join implication on a ball: with `M_k` the
/// largest perimeter of a rigid triple having a side of length `k`, every
/// triple with `d(a,b) = n` and `d(a,c) + d(b,c) > n + max(M_1..M_n)` should
/// share a tail at `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathsJoinReport {
    pub center: VertexRef,
    pub radius: u32,
    pub ball_size: usize,
    /// `M_k` for every side length `k` of an observed rigid triple.
    pub rigid_bounds: Vec<SideBound>,
    /// Triples for which the hypothesis held.
    pub checked: usize,
    /// Triples `(a, b, c)` meeting the hypothesis without a shared tail.
    pub violations: Vec<Triple>,
}

pub fn pathsjoin_check(
    oracle: &dyn NeighborOracle,
    center: &VertexKey,
    radius: u32,
    limits: &Limits,
) -> Result<PathsJoinReport> {
    let scan = rigid_scan(oracle, center, radius, None, limits)?;
    let rigid_bounds = side_bounds(&scan.triples, |t| vec![t.dab, t.dbc, t.dca]);
    let max_side = 2 * radius as usize;
    // prefix maxima of M_k
    let mut prefix = vec![0u32; max_side + 1];
    for k in 1..=max_side {
        let mk = rigid_bounds
            .iter()
            .find(|b| b.side as usize == k)
            .map_or(0, |b| b.max_perimeter);
        prefix[k] = prefix[k - 1].max(mk);
    }
    let (ball_size, checked, violations) =
        tail_threshold_check(oracle, center, radius, |n| n + prefix[n as usize], limits)?;
    Ok(PathsJoinReport {
        center: scan.center,
        radius,
        ball_size,
        rigid_bounds,
        checked,
        violations,
    })
}

/// Checks every triple in the ball: whenever `d(a,c) + d(b,c)` exceeds
/// `threshold(d(a,b))`, minimal paths from `a` and `b` must share a tail at
/// `c`. Returns the ball size, the number of triples meeting the hypothesis,
/// and those that fail.
pub fn tail_threshold_check(
    oracle: &dyn NeighborOracle,
    center: &VertexKey,
    radius: u32,
    threshold: impl Fn(u32) -> u32 + Sync,
    limits: &Limits,
) -> Result<(usize, usize, Vec<Triple>)> {
    let m = LocalMetric::new(oracle, center, radius, limits)?;
    let order = m.sorted_ball();
    let results: Vec<(usize, Vec<(usize, usize, usize)>)> = (0..order.len())
        .into_par_iter()
        .map(|i| {
            let a = order[i];
            let mut checked = 0;
            let mut bad = Vec::new();
            for &b in &order[i + 1..] {
                let limit = threshold(m.d(a, b));
                for &c in &order {
                    if c == a || c == b || m.d(a, c) + m.d(b, c) <= limit {
                        continue;
                    }
                    checked += 1;
                    if !m.shares_tail(a, b, c) {
                        bad.push((a, b, c));
                    }
                }
            }
            (checked, bad)
        })
        .collect();
    let checked = results.iter().map(|r| r.0).sum();
    let violations = results
        .into_iter()
        .flat_map(|r| r.1)
        .map(|(a, b, c)| local_triple(oracle, &m, a, b, c))
        .collect();
    Ok((m.ball_len(), checked, violations))
}

/// Distance fields from `a` and `b` large enough to decide shared tails for
/// every `c` within `radius` of `a`.
struct PairFields {
    from_a: DistanceField,
    from_b: DistanceField,
    dab: u32,
}

impl PairFields {
    fn new(
        oracle: &dyn NeighborOracle,
        a: &VertexKey,
        b: &VertexKey,
        radius: u32,
        limits: &Limits,
    ) -> Result<Self> {
        if a == b {
            return Err(Error::Degenerate("the pair must have distinct vertices".into()));
        }
        let from_a = bfs(oracle, a, radius + 1, limits)?;
        let dab = from_a.dist(b).filter(|&d| d <= radius).ok_or_else(|| {
            Error::invalid(format!(
                "{} is farther than the scan radius {radius} from {}",
                oracle.label(b),
                oracle.label(a)
            ))
        })?;
        let from_b = bfs(oracle, b, radius + 1 + dab, limits)?;
        Ok(PairFields {
            from_a,
            from_b,
            dab,
        })
    }

    /// Candidates `c` within the radius, excluding `a` and `b`.
    fn candidates(&self, radius: u32) -> Vec<(VertexKey, u32, u32)> {
        let mut out: Vec<(VertexKey, u32, u32)> = (0..self.from_a.len())
            .filter(|&i| self.from_a.dist_at(i) <= radius)
            .map(|i| self.from_a.key_at(i))
            .filter(|c| *c != self.from_a.source() && *c != self.from_b.source())
            .map(|c| {
                let da = self.from_a.dist(c).expect("in field");
                let db = self.from_b.dist(c).expect("within extended radius");
                (c.clone(), da, db)
            })
            .collect();
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Some neighbor of `c` is one step closer to both `a` and `b`.
    fn shares_tail(&self, oracle: &dyn NeighborOracle, c: &VertexKey, da: u32, db: u32) -> bool {
        oracle.neighbors(c).iter().any(|z| {
            self.from_a.dist(z) == Some(da - 1) && self.from_b.dist(z) == Some(db - 1)
        })
    }

    fn no_tail(&self, oracle: &dyn NeighborOracle, radius: u32) -> Vec<(VertexKey, u32, u32)> {
        self.candidates(radius)
            .into_par_iter()
            .filter(|(c, da, db)| !self.shares_tail(oracle, c, *da, *db))
            .collect()
    }
}

/// Largest perimeter of a triple `{a, b, c}` without a shared tail, over all
/// `c` within `scan_radius` of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBoundRecord {
    pub a: VertexRef,
    pub b: VertexRef,
    pub dab: u32,
    pub scan_radius: u32,
    /// Number of `c` without a shared tail.
    pub no_tail_count: usize,
    /// The no-shared-tail triple of largest perimeter (smallest `c` key on
    /// ties), or `None` if there is none.
    pub worst: Option<Triple>,
    pub empirical_bound: Option<u32>,
}

pub fn tail_bound_estimate(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    b: &VertexKey,
    radius: u32,
    limits: &Limits,
) -> Result<TailBoundRecord> {
    let fields = PairFields::new(oracle, a, b, radius, limits)?;
    let found = fields.no_tail(oracle, radius);
    let worst = found
        .iter()
        .max_by(|x, y| (x.1 + x.2).cmp(&(y.1 + y.2)).then_with(|| y.0.cmp(&x.0)))
        .map(|(c, da, db)| {
            Triple::new(
                oracle.vertex_ref(a),
                oracle.vertex_ref(b),
                oracle.vertex_ref(c),
                fields.dab,
                *db,
                *da,
            )
        });
    Ok(TailBoundRecord {
        a: oracle.vertex_ref(a),
        b: oracle.vertex_ref(b),
        dab: fields.dab,
        scan_radius: radius,
        no_tail_count: found.len(),
        empirical_bound: worst.as_ref().map(|t| t.perimeter),
        worst,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    /// The bound grew with the radius: evidence of a non-Busemann point.
    Growth,
    /// The bound did not change: evidence that the pair is tame.
    Stagnation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBoundTrend {
    pub inner: TailBoundRecord,
    pub outer: TailBoundRecord,
    pub trend: Trend,
}

/// Tail bounds at two radii and whether the bound grew between them.
pub fn tail_bound_trend(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    b: &VertexKey,
    radii: (u32, u32),
    limits: &Limits,
) -> Result<TailBoundTrend> {
    if radii.0 >= radii.1 {
        return Err(Error::invalid("radii must increase"));
    }
    let inner = tail_bound_estimate(oracle, a, b, radii.0, limits)?;
    let outer = tail_bound_estimate(oracle, a, b, radii.1, limits)?;
    let trend = if outer.empirical_bound > inner.empirical_bound {
        Trend::Growth
    } else {
        Trend::Stagnation
    };
    Ok(TailBoundTrend {
        inner,
        outer,
        trend,
    })
}

/// Re-derives a tail-bound record from scratch: the worst triple is
/// rechecked with the definitional predicates and the scan is repeated.
pub fn verify_tail_bound(oracle: &dyn NeighborOracle, rec: &TailBoundRecord, limits: &Limits) -> Result<()> {
    if let Some(t) = &rec.worst {
        check_no_tail_triple(oracle, t, limits)?;
        if Some(t.perimeter) != rec.empirical_bound {
            return Err(Error::Verification("bound differs from worst perimeter".into()));
        }
    }
    let again = tail_bound_estimate(oracle, &rec.a.key, &rec.b.key, rec.scan_radius, limits)?;
    if &again != rec {
        return Err(Error::Verification("tail-bound scan does not reproduce".into()));
    }
    Ok(())
}

fn check_no_tail_triple(oracle: &dyn NeighborOracle, t: &Triple, limits: &Limits) -> Result<()> {
    let cap = t.perimeter;
    let fresh = make_triple(oracle, &t.a.key, &t.b.key, &t.c.key, cap, limits)?;
    if fresh.perimeter != t.perimeter || (fresh.dab, fresh.dbc, fresh.dca) != (t.dab, t.dbc, t.dca) {
        return Err(Error::Verification(format!(
            "triple {{{}, {}, {}}} has perimeter {}, not {}",
            t.a, t.b, t.c, fresh.perimeter, t.perimeter
        )));
    }
    if shares_tail(oracle, &t.a.key, &t.b.key, &t.c.key, cap, limits)? {
        return Err(Error::Verification(format!(
            "minimal paths from {} and {} to {} share a tail",
            t.a, t.b, t.c
        )));
    }
    Ok(())
}

/// The vertex at distance `floor(d(a,b)/2)` from `a` on a minimal path to
/// `b`, smallest key first.
pub fn canonical_midpoint(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    b: &VertexKey,
    cap: u32,
    limits: &Limits,
) -> Result<VertexKey> {
    let d = distance(oracle, a, b, cap, limits)?.ok_or_else(|| Error::ExceedsCap {
        from: oracle.label(a),
        to: oracle.label(b),
        cap,
    })?;
    let on_path = geodesic_vertices(oracle, a, b, cap, limits)?;
    let from_a = bfs(oracle, a, d / 2, limits)?;
    Ok(on_path
        .into_iter()
        .find(|v| from_a.dist(v) == Some(d / 2))
        .expect("geodesic has a vertex at every distance"))
}

/// Finite evidence for a non-Busemann point: triples `{a, b, c_i}` with
/// strictly increasing perimeters and no shared tail at any `c_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonBusemannCertificate {
    pub graph: String,
    pub a: VertexRef,
    pub b: VertexRef,
    pub scan_radius: u32,
    pub triples: Vec<Triple>,
}

impl NonBusemannCertificate {
    pub fn perimeters(&self) -> Vec<u32> {
        self.triples.iter().map(|t| t.perimeter).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Certificate(NonBusemannCertificate),
    NoneFound {
        scan_radius: u32,
        /// Distinct perimeters of no-shared-tail triples that were found.
        perimeters: Vec<u32>,
    },
}

/// Searches the ball of radius `radius` about `a` for `count` triples
/// `{a, b, c}` with no shared tail and distinct perimeters.
///
/// Candidates are visited by distance from the canonical midpoint of
/// `(a, b)`, then by key; the first candidate for each perimeter is kept.
/// The certificate holds the `count` largest perimeters, ascending.
pub fn nonbusemann_witness(
    oracle: &dyn NeighborOracle,
    a: &VertexKey,
    b: &VertexKey,
    radius: u32,
    count: usize,
    limits: &Limits,
) -> Result<WitnessOutcome> {
    if count < 2 {
        return Err(Error::invalid("a certificate needs at least 2 triples"));
    }
    let fields = PairFields::new(oracle, a, b, radius, limits)?;
    let mid = canonical_midpoint(oracle, a, b, fields.dab, limits)?;
    let from_mid = bfs(oracle, &mid, radius + fields.dab, limits)?;
    let mut found = fields.no_tail(oracle, radius);
    found.sort_by(|x, y| {
        let dx = from_mid.dist(&x.0).expect("within radius");
        let dy = from_mid.dist(&y.0).expect("within radius");
        dx.cmp(&dy).then_with(|| x.0.cmp(&y.0))
    });
    let mut first: BTreeMap<u32, (VertexKey, u32, u32)> = BTreeMap::new();
    for (c, da, db) in found {
        first.entry(fields.dab + da + db).or_insert((c, da, db));
    }
    if first.len() < count {
        return Ok(WitnessOutcome::NoneFound {
            scan_radius: radius,
            perimeters: first.keys().copied().collect(),
        });
    }
    let triples = first
        .into_values()
        .rev()
        .take(count)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|(c, da, db)| {
            Triple::new(
                oracle.vertex_ref(a),
                oracle.vertex_ref(b),
                oracle.vertex_ref(&c),
                fields.dab,
                db,
                da,
            )
        })
        .collect();
    Ok(WitnessOutcome::Certificate(NonBusemannCertificate {
        graph: oracle.descriptor(),
        a: oracle.vertex_ref(a),
        b: oracle.vertex_ref(b),
        scan_radius: radius,
        triples,
    }))
}

/// Rechecks a certificate from scratch with fresh distance computations.
pub fn verify_certificate(
    oracle: &dyn NeighborOracle,
    cert: &NonBusemannCertificate,
    limits: &Limits,
) -> Result<()> {
    if cert.graph != oracle.descriptor() {
        return Err(Error::Verification(format!(
            "certificate is for {}, not {}",
            cert.graph,
            oracle.descriptor()
        )));
    }
    if cert.triples.len() < 2 {
        return Err(Error::Verification("certificate has fewer than 2 triples".into()));
    }
    for w in cert.triples.windows(2) {
        if w[0].perimeter >= w[1].perimeter {
            return Err(Error::Verification("perimeters are not strictly increasing".into()));
        }
    }
    for t in &cert.triples {
        if t.a != cert.a || t.b != cert.b {
            return Err(Error::Verification("triple does not use the certified pair".into()));
        }
        if distance(oracle, &cert.a.key, &t.c.key, cert.scan_radius, limits)?.is_none() {
            return Err(Error::Verification(format!("{} lies outside the scan radius", t.c)));
        }
        check_no_tail_triple(oracle, t, limits)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_rigid_triple, Ladder};
    use crate::group::{builtin_oracle, GraphDescriptor};

    fn oracle(name: &str) -> Box<dyn NeighborOracle> {
        builtin_oracle(&GraphDescriptor::parse(name).unwrap()).unwrap()
    }

    #[test]
    fn lattice_has_no_rigid_triples() {
        let g = oracle("zd:2");
        let s = rigid_scan(&*g, &g.origin(), 4, None, &Limits::default()).unwrap();
        assert!(s.triples.is_empty());
        assert_eq!(s.ball_size, 41);
    }

    #[test]
    fn rigid_scan_matches_the_definition() {
        let g = oracle("free_product:2,3");
        let l = Limits::default();
        let s = rigid_scan(&*g, &g.origin(), 3, None, &l).unwrap();
        assert!(!s.triples.is_empty());
        for t in &s.triples {
            assert!(t.a < t.b && t.b < t.c);
            assert!(is_rigid_triple(&*g, &t.a.key, &t.b.key, &t.c.key, 10, &l).unwrap());
        }
        assert_eq!(s.by_min_side.iter().map(|b| b.max_perimeter).max(), Some(3));
    }

    #[test]
    fn gamma1_tail_bound_grows() {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let (a, b) = (g.resolve("(1,1)").unwrap(), g.resolve("(1,-1)").unwrap());
        let t = tail_bound_trend(&g, &a, &b, (6, 9), &l).unwrap();
        assert_eq!(t.inner.empirical_bound, Some(14));
        assert_eq!(t.outer.empirical_bound, Some(20));
        assert_eq!(t.trend, Trend::Growth);
        verify_tail_bound(&g, &t.outer, &l).unwrap();
    }

    #[test]
    fn gamma1_certificate() {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let (a, b) = (g.resolve("(1,1)").unwrap(), g.resolve("(1,-1)").unwrap());
        let WitnessOutcome::Certificate(cert) = nonbusemann_witness(&g, &a, &b, 8, 5, &l).unwrap() else {
            panic!("expected a certificate");
        };
        let labels: Vec<String> = cert.triples.iter().map(|t| t.c.to_string()).collect();
        assert_eq!(labels, ["(4,0)", "(5,0)", "(6,0)", "(7,0)", "(8,0)"]);
        assert_eq!(cert.perimeters(), [10, 12, 14, 16, 18]);
        verify_certificate(&g, &cert, &l).unwrap();

        let mut forged = cert.clone();
        forged.triples[0] = make_triple(&g, &a, &b, &g.resolve("(4,1)").unwrap(), 20, &l).unwrap();
        assert!(verify_certificate(&g, &forged, &l).is_err());
    }

    #[test]
    fn lattice_has_no_witness() {
        let g = oracle("zd:2");
        let l = Limits::default();
        let out = nonbusemann_witness(&*g, &g.origin(), &g.resolve("ab").unwrap(), 6, 2, &l).unwrap();
        assert!(matches!(out, WitnessOutcome::NoneFound { .. }));
    }

    #[test]
    fn midpoint_is_on_a_geodesic() {
        let g = oracle("zd:2");
        let l = Limits::default();
        let m = canonical_midpoint(&*g, &g.origin(), &g.resolve("aabb").unwrap(), 10, &l).unwrap();
        assert_eq!(g.label(&m), "(0,2)");
    }

    #[test]
    fn pathsjoin_holds_on_a_tree() {
        let g = oracle("free:2");
        let r = pathsjoin_check(&*g, &g.origin(), 3, &Limits::default()).unwrap();
        assert!(r.rigid_bounds.is_empty());
        assert!(r.checked > 0);
        assert!(r.violations.is_empty());
    }
}
