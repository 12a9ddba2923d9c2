//! Scenario execution and versioned JSON/CSV reports.

pub mod check;
mod scenario;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use scenario::{
    parse_pair, split_list, Operation, Params, ScenarioSpec, DEFAULT_GEODESIC_CAP,
    DEFAULT_PATH_LIMIT, DEFAULT_PROBE_RADIUS, DEFAULT_R_TEST, DEFAULT_WITNESS_COUNT,
};
use scenario::Task;

use crate::boundary::{
    almost_geodesic_check, busemann_reachability, fingerprints, lipschitz_ratio,
    nonbusemann_witness, parse_epsilon, pathsjoin_check, rigid_scan, tail_bound_estimate,
    tail_bound_trend, verify_certificate, verify_tail_bound, weakly_geodesic_check,
    FingerprintCensus, GeodesicRay, LipschitzRatio, PathsJoinReport, Reachability, RayCheck,
    RigidScan, SideBound, TailBoundRecord, TailBoundTrend, WitnessOutcome,
};
use crate::error::{Error, Result};
use crate::graph::{bfs, enumerate_geodesics, Limits, NeighborOracle, VertexRef};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallEntry {
    pub vertex: VertexRef,
    pub distance: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallRecord {
    pub center: VertexRef,
    pub radius: u32,
    pub sphere_sizes: Vec<usize>,
    /// Sorted by key.
    pub vertices: Vec<BallEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicsRecord {
    pub from: VertexRef,
    pub to: VertexRef,
    pub distance: u32,
    /// Total number of minimal paths, in decimal.
    pub count: String,
    pub paths: Vec<Vec<VertexRef>>,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachabilityRecord {
    pub census: FingerprintCensus,
    pub class_values: Vec<i64>,
    pub result: Reachability,
}

/// Typed results, one variant per operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "records", rename_all = "snake_case")]
pub enum Payload {
    Ball(BallRecord),
    Geodesics(GeodesicsRecord),
    RigidScan(RigidScan),
    Pathsjoin(PathsJoinReport),
    TailBound(TailBoundRecord),
    TailTrend(TailBoundTrend),
    Witness(WitnessOutcome),
    Fingerprints(FingerprintCensus),
    Reachability(ReachabilityRecord),
    RayCheck(RayCheck),
    Lipschitz(LipschitzRatio),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    /// Always true: no randomness, and output is independent of the
    /// worker count.
    pub deterministic: bool,
    /// Seconds since the Unix epoch; omitted unless requested so that
    /// reports stay byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Provenance {
    pub fn current(with_timestamp: bool) -> Self {
        Provenance {
            tool: format!("horobound {}", env!("CARGO_PKG_VERSION")),
            deterministic: true,
            timestamp: with_timestamp.then(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VerificationStatus {
    /// Not yet reloaded and rechecked.
    Pending,
    Verified { checks: Vec<String> },
    Failed { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub graph: String,
    pub operation: Operation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
    pub scenario: ScenarioSpec,
    pub payload: Value,
    pub provenance: Provenance,
    pub verification: VerificationStatus,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(text)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(format!(
                "report schema version {} is not supported (expected {SCHEMA_VERSION})",
                r.schema_version
            )));
        }
        Ok(r)
    }

    pub fn typed_payload(&self) -> Result<Payload> {
        Ok(serde_json::from_value(self.payload.clone())?)
    }

    /// A perimeter-vs-n style table for operations that have one.
    pub fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Io(e.to_string());
        let sides = |w: &mut csv::Writer<Vec<u8>>, head: &str, rows: &[SideBound]| -> Result<()> {
            w.write_record([head, "count", "max_perimeter"]).map_err(err)?;
            for b in rows {
                w.serialize((b.side, b.count, b.max_perimeter)).map_err(err)?;
            }
            Ok(())
        };
        match self.typed_payload()? {
            Payload::Ball(b) => {
                w.write_record(["radius", "sphere_size"]).map_err(err)?;
                for (r, n) in b.sphere_sizes.iter().enumerate() {
                    w.serialize((r, n)).map_err(err)?;
                }
            }
            Payload::RigidScan(s) => sides(&mut w, "min_side", &s.by_min_side)?,
            Payload::Pathsjoin(p) => sides(&mut w, "side", &p.rigid_bounds)?,
            Payload::Witness(WitnessOutcome::Certificate(c)) => {
                w.write_record(["n", "c", "dab", "dbc", "dca", "perimeter"]).map_err(err)?;
                for (i, t) in c.triples.iter().enumerate() {
                    w.serialize((i + 1, t.c.to_string(), t.dab, t.dbc, t.dca, t.perimeter))
                        .map_err(err)?;
                }
            }
            Payload::TailBound(t) => tail_rows(&mut w, &[&t]).map_err(err)?,
            Payload::TailTrend(t) => tail_rows(&mut w, &[&t.inner, &t.outer]).map_err(err)?,
            _ => {
                return Err(Error::invalid(format!(
                    "no CSV table for a {} report",
                    self.operation
                )))
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

fn tail_rows(w: &mut csv::Writer<Vec<u8>>, recs: &[&TailBoundRecord]) -> std::result::Result<(), csv::Error> {
    w.write_record(["scan_radius", "no_tail_count", "empirical_bound"])?;
    for r in recs {
        let bound = r.empirical_bound.map(|b| b.to_string()).unwrap_or_default();
        w.serialize((r.scan_radius, r.no_tail_count, bound))?;
    }
    Ok(())
}

fn execute(oracle: &dyn NeighborOracle, task: &Task, limits: &Limits) -> Result<Payload> {
    let g = oracle;
    Ok(match task {
        Task::Ball { center, radius } => {
            let f = bfs(g, center, *radius, limits)?;
            let mut sphere_sizes = vec![0; *radius as usize + 1];
            let vertices = f
                .sorted_entries()
                .into_iter()
                .map(|(k, d)| {
                    sphere_sizes[d as usize] += 1;
                    BallEntry {
                        vertex: g.vertex_ref(k),
                        distance: d,
                    }
                })
                .collect();
            Payload::Ball(BallRecord {
                center: g.vertex_ref(center),
                radius: *radius,
                sphere_sizes,
                vertices,
            })
        }
        Task::Geodesics { from, to, cap, limit } => {
            let list = enumerate_geodesics(g, from, to, *cap, *limit, limits)?;
            Payload::Geodesics(GeodesicsRecord {
                from: g.vertex_ref(from),
                to: g.vertex_ref(to),
                distance: list.paths[0].len() as u32 - 1,
                count: list.total.to_string(),
                paths: list
                    .paths
                    .iter()
                    .map(|p| p.iter().map(|v| g.vertex_ref(v)).collect())
                    .collect(),
                truncated: list.truncated,
            })
        }
        Task::RigidScan { center, radius, side_cap } => {
            Payload::RigidScan(rigid_scan(g, center, *radius, *side_cap, limits)?)
        }
        Task::Pathsjoin { center, radius } => {
            Payload::Pathsjoin(pathsjoin_check(g, center, *radius, limits)?)
        }
        Task::TailBound { a, b, radius, outer: None } => {
            Payload::TailBound(tail_bound_estimate(g, a, b, *radius, limits)?)
        }
        Task::TailBound { a, b, radius, outer: Some(o) } => {
            Payload::TailTrend(tail_bound_trend(g, a, b, (*radius, *o), limits)?)
        }
        Task::Witness { a, b, radius, count } => {
            Payload::Witness(nonbusemann_witness(g, a, b, *radius, *count, limits)?)
        }
        Task::Fingerprints { base, r_test, annuli } => {
            Payload::Fingerprints(fingerprints(g, base, *r_test, annuli, limits)?)
        }
        Task::Reachability { base, r_test, annuli, class_of, ray_length } => {
            let census = fingerprints(g, base, *r_test, annuli, limits)?;
            let class = census.class_of(class_of).cloned().ok_or_else(|| {
                Error::invalid(format!("{} lies on none of the annuli", g.label(class_of)))
            })?;
            let result = busemann_reachability(g, &census, &class, *ray_length, limits)?;
            Payload::Reachability(ReachabilityRecord {
                class_values: class.values,
                census,
                result,
            })
        }
        Task::WeaklyGeodesic { seq, probes, eps, start } => {
            let eps = parse_epsilon(eps)?;
            Payload::RayCheck(weakly_geodesic_check(g, seq, probes, &eps, *start, limits)?)
        }
        Task::AlmostGeodesic { seq, eps, start } => {
            let eps = parse_epsilon(eps)?;
            Payload::RayCheck(almost_geodesic_check(g, seq, &eps, *start, limits)?)
        }
        Task::Lipschitz { other, radius } => {
            Payload::Lipschitz(lipschitz_ratio(g, &**other, *radius, limits)?)
        }
    })
}

/// Runs a scenario. The report's verification status is `Pending` until
/// [`verify`] rechecks it.
pub fn run(spec: &ScenarioSpec, limits: &Limits) -> Result<Report> {
    let prepared = spec.prepare()?;
    let payload = execute(&*prepared.oracle, &prepared.task, limits)?;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        graph: prepared.oracle.descriptor(),
        operation: spec.operation,
        radius: spec.params.radius,
        scenario: spec.clone(),
        payload: serde_json::to_value(&payload)?,
        provenance: Provenance::current(false),
        verification: VerificationStatus::Pending,
    })
}

/// Reruns the report's scenario and compares payload bytes, then rechecks
/// any certificate, tail bound or ray in the payload from scratch.
pub fn verify(report: &Report, limits: &Limits) -> Result<VerificationStatus> {
    let prepared = report.scenario.prepare()?;
    let g = &*prepared.oracle;
    let stored = report.typed_payload()?;
    let mut checks = Vec::new();
    let fresh = execute(g, &prepared.task, limits)?;
    let fresh_bytes = serde_json::to_vec(&serde_json::to_value(&fresh)?)?;
    if fresh_bytes != serde_json::to_vec(&report.payload)? {
        return Ok(VerificationStatus::Failed {
            reason: "rerunning the scenario gives a different payload".into(),
        });
    }
    checks.push("payload reproduced byte for byte".to_string());
    let outcome = match &stored {
        Payload::Witness(WitnessOutcome::Certificate(c)) => {
            checks.push("certificate rechecked".into());
            verify_certificate(g, c, limits)
        }
        Payload::TailBound(t) => {
            checks.push("tail bound rechecked".into());
            verify_tail_bound(g, t, limits)
        }
        Payload::TailTrend(t) => {
            checks.push("tail bounds rechecked".into());
            verify_tail_bound(g, &t.inner, limits).and_then(|_| verify_tail_bound(g, &t.outer, limits))
        }
        Payload::Reachability(ReachabilityRecord {
            result: Reachability::Reachable { ray },
            ..
        }) => {
            checks.push("ray rechecked".into());
            GeodesicRay::verify(g, &ray.keys(), limits).and_then(|r| {
                if &r == ray {
                    Ok(())
                } else {
                    Err(Error::Verification("ray differs on recheck".into()))
                }
            })
        }
        _ => Ok(()),
    };
    Ok(match outcome {
        Ok(()) => VerificationStatus::Verified { checks },
        Err(Error::Verification(reason)) => VerificationStatus::Failed { reason },
        Err(e) => return Err(e),
    })
}

/// Runs a scenario and records the outcome of [`verify`] on a reloaded
/// copy of the report.
pub fn run_verified(spec: &ScenarioSpec, limits: &Limits) -> Result<Report> {
    let mut report = run(spec, limits)?;
    let reloaded = Report::from_json(&report.to_json()?)?;
    report.verification = verify(&reloaded, limits)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Params {
        Params::default()
    }

    #[test]
    fn gamma1_fingerprints_report() {
        let spec = ScenarioSpec::new(
            "gamma1",
            Operation::Fingerprints,
            Params {
                base: Some("(1,0)".into()),
                r_test: Some(3),
                annuli: vec![10, 12],
                ..params()
            },
        );
        let r = run_verified(&spec, &Limits::default()).unwrap();
        assert!(matches!(r.verification, VerificationStatus::Verified { .. }));
        let Payload::Fingerprints(c) = r.typed_payload().unwrap() else {
            panic!("wrong payload")
        };
        assert_eq!(c.stable_classes().count(), 3);
    }

    #[test]
    fn zd2_rigid_scan_is_empty() {
        let spec = ScenarioSpec::new("zd:2", Operation::RigidScan, Params { radius: Some(5), ..params() });
        let r = run(&spec, &Limits::default()).unwrap();
        let Payload::RigidScan(s) = r.typed_payload().unwrap() else {
            panic!("wrong payload")
        };
        assert!(s.triples.is_empty());
        assert_eq!(r.csv().unwrap(), "min_side,count,max_perimeter\n");
    }

    #[test]
    fn reports_reload_byte_identically() {
        let spec = ScenarioSpec::new(
            "gamma1",
            Operation::Witness,
            Params {
                pair: Some(("(1,1)".into(), "(1,-1)".into())),
                radius: Some(8),
                count: Some(5),
                ..params()
            },
        );
        let l = Limits::default();
        let r = run_verified(&spec, &l).unwrap();
        let text = r.to_json().unwrap();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
        assert_eq!(run_verified(&spec, &l).unwrap().to_json().unwrap(), text);
        let csv = r.csv().unwrap();
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.lines().nth(1).unwrap().ends_with(",10"));
    }

    #[test]
    fn tampered_payload_fails_verification() {
        let spec = ScenarioSpec::new(
            "gamma1",
            Operation::TailBound,
            Params {
                pair: Some(("(1,1)".into(), "(1,-1)".into())),
                radius: Some(6),
                ..params()
            },
        );
        let l = Limits::default();
        let mut r = run(&spec, &l).unwrap();
        r.payload["records"]["empirical_bound"] = serde_json::json!(3);
        assert!(matches!(verify(&r, &l).unwrap(), VerificationStatus::Failed { .. }));
    }

    #[test]
    fn unsupported_schema_is_rejected() {
        let spec = ScenarioSpec::new("zd:1", Operation::Ball, Params { radius: Some(2), ..params() });
        let mut r = run(&spec, &Limits::default()).unwrap();
        r.schema_version = 99;
        assert!(Report::from_json(&serde_json::to_string(&r).unwrap()).is_err());
    }

    #[test]
    fn resource_caps_surface_as_errors() {
        let spec = ScenarioSpec::new("free:3", Operation::Ball, Params { radius: Some(12), ..params() });
        let limits = Limits {
            max_vertices: 1000,
            ..Limits::default()
        };
        assert_eq!(run(&spec, &limits).unwrap_err().exit_code(), 3);
    }
}
