use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rays::GeodesicRay;
use crate::error::{Error, Result};
use crate::graph::{bfs, DistanceField, Limits, NeighborOracle, VertexKey, VertexRef};

/// The function `v -> d(w, z0) - d(w, v)` restricted to the probe ball
/// around `z0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorofunctionFingerprint {
    pub base: VertexRef,
    pub witness: VertexRef,
    /// Probe values in the census's probe order.
    pub values: Vec<i64>,
}

/// Annulus vertices sharing one fingerprint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintClass {
    pub values: Vec<i64>,
    /// Witnesses per annulus radius, sorted by key.
    pub witnesses: BTreeMap<u32, Vec<VertexRef>>,
    /// Seen at two successive annuli.
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintCensus {
    pub base: VertexRef,
    pub r_test: u32,
    pub annuli: Vec<u32>,
    /// The ball of radius `r_test` about the base, sorted by key.
    pub probes: Vec<VertexRef>,
    /// Classes sorted by value vector.
    pub classes: Vec<FingerprintClass>,
}

impl FingerprintCensus {
    pub fn stable_classes(&self) -> impl Iterator<Item = &FingerprintClass> {
        self.classes.iter().filter(|c| c.stable)
    }

    /// The class that has `v` among its witnesses.
    pub fn class_of(&self, v: &VertexKey) -> Option<&FingerprintClass> {
        self.classes
            .iter()
            .find(|c| c.witnesses.values().flatten().any(|w| &w.key == v))
    }

    pub fn probe_index(&self, v: &VertexKey) -> Option<usize> {
        self.probes.iter().position(|p| &p.key == v)
    }
}

/// Distance fields from every probe, out to `reach`.
fn probe_fields(
    oracle: &dyn NeighborOracle,
    probes: &[VertexKey],
    reach: u32,
    limits: &Limits,
) -> Result<Vec<DistanceField>> {
    probes
        .par_iter()
        .map(|p| bfs(oracle, p, reach, limits))
        .collect()
}

/// `d(w, z0) - d(w, p)` for each probe `p`, given `dw = d(w, z0)`.
fn values_at(fields: &[DistanceField], w: &VertexKey, dw: u32) -> Vec<i64> {
    fields
        .iter()
        .map(|f| dw as i64 - f.dist(w).expect("probe field covers the annulus") as i64)
        .collect()
}

/// Groups the vertices of each annulus `{v : d(z0, v) = r}` by fingerprint.
pub fn fingerprints(
    oracle: &dyn NeighborOracle,
    base: &VertexKey,
    r_test: u32,
    annuli: &[u32],
    limits: &Limits,
) -> Result<FingerprintCensus> {
    let mut annuli = annuli.to_vec();
    annuli.sort_unstable();
    annuli.dedup();
    let Some(&outer) = annuli.last() else {
        return Err(Error::invalid("at least one annulus radius is required"));
    };
    if r_test >= annuli[0] {
        return Err(Error::invalid("r_test must be smaller than every annulus radius"));
    }
    let from_base = bfs(oracle, base, outer, limits)?;
    let probes: Vec<VertexKey> = from_base
        .sorted_entries()
        .into_iter()
        .filter(|(_, d)| *d <= r_test)
        .map(|(k, _)| k.clone())
        .collect();
    let fields = probe_fields(oracle, &probes, outer + r_test, limits)?;
    let mut classes: BTreeMap<Vec<i64>, BTreeMap<u32, Vec<VertexRef>>> = BTreeMap::new();
    for &r in &annuli {
        for w in from_base.sphere(r) {
            let vals = values_at(&fields, w, r);
            classes
                .entry(vals)
                .or_default()
                .entry(r)
                .or_default()
                .push(oracle.vertex_ref(w));
        }
    }
    let classes = classes
        .into_iter()
        .map(|(values, witnesses)| {
            let stable = annuli
                .windows(2)
                .any(|p| witnesses.contains_key(&p[0]) && witnesses.contains_key(&p[1]));
            FingerprintClass {
                values,
                witnesses,
                stable,
            }
        })
        .collect();
    Ok(FingerprintCensus {
        base: oracle.vertex_ref(base),
        r_test,
        annuli,
        probes: probes.iter().map(|p| oracle.vertex_ref(p)).collect(),
        classes,
    })
}

/// Fingerprint of a single vertex `w` against the ball of radius `r_test`
/// about `base`.
pub fn fingerprint_of(
    oracle: &dyn NeighborOracle,
    base: &VertexKey,
    r_test: u32,
    w: &VertexKey,
    limits: &Limits,
) -> Result<HorofunctionFingerprint> {
    let from_w = crate::graph::distance(oracle, w, base, u32::MAX, limits)?
        .ok_or_else(|| Error::invalid("witness not connected to base"))?;
    let field = bfs(oracle, w, from_w + r_test, limits)?;
    let ball = bfs(oracle, base, r_test, limits)?;
    let values = ball
        .sorted_entries()
        .into_iter()
        .map(|(p, _)| from_w as i64 - field.dist(p).expect("within reach") as i64)
        .collect();
    Ok(HorofunctionFingerprint {
        base: oracle.vertex_ref(base),
        witness: oracle.vertex_ref(w),
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Reachability {
    /// A geodesic from the base whose points from time `ceil(L/2)` on all
    /// carry the class fingerprint.
    Reachable { ray: GeodesicRay },
    UnreachableWithinRadius { ray_length: u32 },
}

/// Looks for a geodesic `γ(0) = z0, ..., γ(L)` with the class fingerprint at
/// every `γ(t)`, `2t >= L`. Success is the finite shadow of a geodesic ray
/// converging to the class; failure is evidence, not proof, that the class
/// is not a Busemann point.
pub fn busemann_reachability(
    oracle: &dyn NeighborOracle,
    census: &FingerprintCensus,
    class: &FingerprintClass,
    ray_length: u32,
    limits: &Limits,
) -> Result<Reachability> {
    if !class.stable {
        return Err(Error::invalid("reachability needs a stable class"));
    }
    if ray_length == 0 {
        return Err(Error::invalid("ray length must be positive"));
    }
    let base = &census.base.key;
    let from_base = bfs(oracle, base, ray_length, limits)?;
    let probes: Vec<VertexKey> = census.probes.iter().map(|p| p.key.clone()).collect();
    let fields = probe_fields(oracle, &probes, ray_length + census.r_test, limits)?;
    let start = ray_length.div_ceil(2);
    // good[i]: some geodesic from the base reaches vertex i through good
    // vertices only
    let n = from_base.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| from_base.dist_at(i));
    let matches: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|i| {
            let d = from_base.dist_at(i);
            d < start || values_at(&fields, from_base.key_at(i), d) == class.values
        })
        .collect();
    let mut good = vec![false; n];
    for &i in &order {
        good[i] = matches[i]
            && (from_base.dist_at(i) == 0
                || from_base.preds_at(i).iter().any(|&p| good[p as usize]));
    }
    let end = (0..n)
        .filter(|&i| good[i] && from_base.dist_at(i) == ray_length)
        .min_by(|&x, &y| from_base.key_at(x).cmp(from_base.key_at(y)));
    let Some(mut i) = end else {
        return Ok(Reachability::UnreachableWithinRadius { ray_length });
    };
    let mut path = vec![from_base.key_at(i).clone()];
    while from_base.dist_at(i) > 0 {
        i = from_base
            .preds_at(i)
            .iter()
            .map(|&p| p as usize)
            .filter(|&p| good[p])
            .min_by(|&x, &y| from_base.key_at(x).cmp(from_base.key_at(y)))
            .expect("good vertex has a good predecessor");
        path.push(from_base.key_at(i).clone());
    }
    path.reverse();
    let ray = GeodesicRay::verify(oracle, &path, limits)?;
    Ok(Reachability::Reachable { ray })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Ladder;
    use crate::group::{builtin_oracle, GraphDescriptor};

    #[test]
    fn gamma1_has_three_classes() {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let c = fingerprints(&g, &g.origin(), 3, &[10, 12], &l).unwrap();
        assert_eq!(c.classes.len(), 3);
        assert_eq!(c.stable_classes().count(), 3);
        let row0 = c.class_of(&Ladder::vertex(11, 0)).unwrap();
        let k = c.probe_index(&Ladder::vertex(2, 0)).unwrap();
        assert_eq!(row0.values[k], 1);
        for (p, v) in c.probes.iter().zip(&row0.values) {
            let d = crate::graph::distance(&g, &g.origin(), &p.key, 10, &l).unwrap().unwrap();
            assert!(v.unsigned_abs() <= d as u64);
        }
    }

    #[test]
    fn line_has_two_ends() {
        let g = builtin_oracle(&GraphDescriptor::parse("zd:1").unwrap()).unwrap();
        let c = fingerprints(&*g, &g.origin(), 2, &[5, 6], &Limits::default()).unwrap();
        assert_eq!(c.stable_classes().count(), 2);
    }

    #[test]
    fn reachability_on_gamma1() {
        let g = Ladder::gamma1();
        let l = Limits::default();
        let c = fingerprints(&g, &g.origin(), 3, &[10, 12], &l).unwrap();
        let row1 = c.class_of(&Ladder::vertex(10, 1)).unwrap();
        let Reachability::Reachable { ray } = busemann_reachability(&g, &c, row1, 10, &l).unwrap() else {
            panic!("row 1 should be reachable");
        };
        assert_eq!(ray.vertices.last().unwrap().to_string(), "(10,1)");
        let row0 = c.class_of(&Ladder::vertex(11, 0)).unwrap();
        for len in [3, 6, 10] {
            assert_eq!(
                busemann_reachability(&g, &c, row0, len, &l).unwrap(),
                Reachability::UnreachableWithinRadius { ray_length: len }
            );
        }
    }
}
