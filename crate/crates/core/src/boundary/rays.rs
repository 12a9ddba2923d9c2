use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs, check_path, Limits, NeighborOracle, PathCheck, VertexKey, VertexRef};

/// A finite geodesic `γ(0), ..., γ(L)` whose defining identity
/// `d(γ(i), γ(j)) = |i - j|` has been checked exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicRay {
    pub vertices: Vec<VertexRef>,
    pub verified_length: u32,
}

impl GeodesicRay {
    pub fn verify(oracle: &dyn NeighborOracle, path: &[VertexKey], limits: &Limits) -> Result<Self> {
        if path.is_empty() {
            return Err(Error::invalid("a ray needs at least one vertex"));
        }
        match check_path(oracle, path, limits)? {
            PathCheck::Geodesic => Ok(GeodesicRay {
                vertices: path.iter().map(|v| oracle.vertex_ref(v)).collect(),
                verified_length: (path.len() - 1) as u32,
            }),
            PathCheck::NotAPath { index } => Err(Error::NotAPath { index }),
            PathCheck::NotGeodesic { i, j, distance } => Err(Error::Verification(format!(
                "d(γ({i}), γ({j})) = {distance}, not {}",
                j - i
            ))),
        }
    }

    pub fn keys(&self) -> Vec<VertexKey> {
        self.vertices.iter().map(|v| v.key.clone()).collect()
    }
}

/// Extends a ray by `steps` vertices, each time taking the smallest-key
/// neighbor of the endpoint that keeps the path geodesic.
pub fn extend_ray(
    oracle: &dyn NeighborOracle,
    ray: &GeodesicRay,
    steps: u32,
    limits: &Limits,
) -> Result<GeodesicRay> {
    let mut path = ray.keys();
    for _ in 0..steps {
        let len = path.len() as u32;
        let last = path.last().expect("nonempty ray");
        let mut next = oracle.neighbors(last);
        next.sort();
        let ok = next.into_iter().find_map(|w| {
            let field = bfs(oracle, &w, len, limits).ok()?;
            path.iter()
                .enumerate()
                .all(|(i, v)| field.dist(v) == Some(len - i as u32))
                .then_some(w)
        });
        match ok {
            Some(w) => path.push(w),
            None => {
                return Err(Error::Verification(format!(
                    "no geodesic extension past {}",
                    oracle.label(last)
                )))
            }
        }
    }
    GeodesicRay::verify(oracle, &path, limits)
}

/// Parses a positive rational tolerance: `3/2`, `1.5` or `2`.
pub fn parse_epsilon(text: &str) -> Result<Ratio<i64>> {
    let bad = || Error::invalid(format!("bad tolerance {text:?}"));
    let t = text.trim();
    let r = if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ratio::new(p, q)
    } else if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10_i64.pow(frac.len() as u32);
        let w: i64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
        let f: i64 = frac.parse().map_err(|_| bad())?;
        Ratio::new(w * den + f, den)
    } else {
        Ratio::from_integer(t.parse().map_err(|_| bad())?)
    };
    if r <= Ratio::zero() {
        return Err(Error::invalid("tolerance must be positive"));
    }
    Ok(r)
}

/// `|x| < eps`, exactly.
fn within(x: i64, eps: &Ratio<i64>) -> bool {
    Ratio::from_integer(x.abs()) < *eps
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RayViolation {
    /// `|d(γ(t), γ(0)) - t| >= ε`.
    Base { t: usize, value: i64 },
    /// `|d(γ(t), y) - d(γ(s), y) - (t - s)| >= ε`.
    Probe { t: usize, s: usize, probe: VertexRef, value: i64 },
    /// `|d(γ(t), γ(s)) + d(γ(s), γ(0)) - t| >= ε`.
    Almost { t: usize, s: usize, value: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayCheck {
    pub holds: bool,
    pub conditions_checked: usize,
    pub violation: Option<RayViolation>,
}

/// `d(source, targets[i])` for every target, growing the search radius as
/// needed.
fn distances_from(
    oracle: &dyn NeighborOracle,
    source: &VertexKey,
    targets: &[VertexKey],
    limits: &Limits,
) -> Result<Vec<u32>> {
    let mut radius = 8;
    loop {
        let field = bfs(oracle, source, radius, limits)?;
        let ds: Option<Vec<u32>> = targets.iter().map(|t| field.dist(t)).collect();
        if let Some(ds) = ds {
            return Ok(ds);
        }
        if field.frontier_complete() {
            return Err(Error::invalid(format!(
                "some sequence vertex is unreachable from {}",
                oracle.label(source)
            )));
        }
        radius *= 2;
    }
}

/// Checks the weakly-geodesic inequalities for times `s, t >= n_start`
/// (both inside the sequence) and every probe. `seq[t]` is `γ(t)`.
pub fn weakly_geodesic_check(
    oracle: &dyn NeighborOracle,
    seq: &[VertexKey],
    probes: &[VertexKey],
    eps: &Ratio<i64>,
    n_start: usize,
    limits: &Limits,
) -> Result<RayCheck> {
    if seq.is_empty() {
        return Err(Error::invalid("empty sequence"));
    }
    let d0 = distances_from(oracle, &seq[0], seq, limits)?;
    let mut probes = probes.to_vec();
    probes.sort();
    probes.dedup();
    let dy: Vec<Vec<u32>> = probes
        .par_iter()
        .map(|y| distances_from(oracle, y, seq, limits))
        .collect::<Result<_>>()?;
    let mut checked = 0;
    for t in n_start..seq.len() {
        checked += 1;
        let value = d0[t] as i64 - t as i64;
        if !within(value, eps) {
            return Ok(violated(checked, RayViolation::Base { t, value }));
        }
        for s in n_start..t {
            for (y, d) in probes.iter().zip(&dy) {
                checked += 1;
                let value = d[t] as i64 - d[s] as i64 - (t as i64 - s as i64);
                if !within(value, eps) {
                    let probe = oracle.vertex_ref(y);
                    return Ok(violated(checked, RayViolation::Probe { t, s, probe, value }));
                }
            }
        }
    }
    Ok(RayCheck {
        holds: true,
        conditions_checked: checked,
        violation: None,
    })
}

/// Checks `|d(γ(t), γ(s)) + d(γ(s), γ(0)) - t| < ε` for `t >= s >= n_start`.
pub fn almost_geodesic_check(
    oracle: &dyn NeighborOracle,
    seq: &[VertexKey],
    eps: &Ratio<i64>,
    n_start: usize,
    limits: &Limits,
) -> Result<RayCheck> {
    if seq.is_empty() {
        return Err(Error::invalid("empty sequence"));
    }
    let rows: Vec<Vec<u32>> = seq
        .par_iter()
        .map(|v| distances_from(oracle, v, seq, limits))
        .collect::<Result<_>>()?;
    let mut checked = 0;
    for t in n_start..seq.len() {
        for s in n_start..=t {
            checked += 1;
            let value = rows[s][t] as i64 + rows[0][s] as i64 - t as i64;
            if !within(value, eps) {
                return Ok(violated(checked, RayViolation::Almost { t, s, value }));
            }
        }
    }
    Ok(RayCheck {
        holds: true,
        conditions_checked: checked,
        violation: None,
    })
}

fn violated(checked: usize, v: RayViolation) -> RayCheck {
    RayCheck {
        holds: false,
        conditions_checked: checked,
        violation: Some(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Ladder;

    fn gamma0(len: i64) -> Vec<VertexKey> {
        let mut s = vec![Ladder::vertex(1, 1)];
        s.extend((1..=len).map(|n| Ladder::vertex(n, 0)));
        s
    }

    #[test]
    fn epsilon_parsing() {
        assert_eq!(parse_epsilon("3/2").unwrap(), Ratio::new(3, 2));
        assert_eq!(parse_epsilon("1.5").unwrap(), Ratio::new(3, 2));
        assert_eq!(parse_epsilon("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_epsilon("2").unwrap(), Ratio::from_integer(2));
        for bad in ["0", "-1", "1/0", "x", "1.", ".5.5"] {
            assert!(parse_epsilon(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn gamma0_is_weakly_but_not_almost_geodesic() {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let probes: Vec<VertexKey> = bfs(&g, &g.origin(), 3, &l).unwrap().vertices().cloned().collect();
        let seq = gamma0(20);
        let w = weakly_geodesic_check(&g, &seq, &probes, &Ratio::new(3, 2), 4, &l).unwrap();
        assert!(w.holds);
        let a = almost_geodesic_check(&g, &seq, &Ratio::new(1, 2), 4, &l).unwrap();
        assert!(!a.holds);
        assert_eq!(a.violation, Some(RayViolation::Almost { t: 5, s: 4, value: 2 }));
    }

    #[test]
    fn alternating_rows_violate() {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let mut seq = vec![Ladder::vertex(1, 1)];
        seq.extend((1..=12).map(|n| Ladder::vertex(n, if n % 2 == 0 { 1 } else { -1 })));
        let probes = vec![g.origin()];
        let w = weakly_geodesic_check(&g, &seq, &probes, &Ratio::new(1, 2), 0, &l).unwrap();
        assert!(!w.holds);
        assert!(matches!(w.violation, Some(RayViolation::Base { t: 1, value: 1 })));
    }

    #[test]
    fn rays_extend_along_rows() {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let ray = GeodesicRay::verify(&g, &[Ladder::vertex(1, 1), Ladder::vertex(2, 1)], &l).unwrap();
        let long = extend_ray(&g, &ray, 5, &l).unwrap();
        assert_eq!(long.verified_length, 6);
        // smallest keys turn down through row 0 onto row -1
        assert_eq!(long.vertices.last().unwrap().to_string(), "(5,-1)");
        assert!(GeodesicRay::verify(&g, &gamma0(3), &l).is_err());
    }
}
