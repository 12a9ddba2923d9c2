//! Finite-radius evidence about the metric boundary.
//!
//! Every result here is a statement about a ball of stated radius. Growth or
//! stagnation across radii is reported, never extrapolated.

mod fingerprint;
mod lipschitz;
mod rays;
mod scan;

pub use fingerprint::{
    busemann_reachability, fingerprint_of, fingerprints, FingerprintCensus, FingerprintClass,
    HorofunctionFingerprint, Reachability,
};
pub use lipschitz::{lipschitz_ratio, LipschitzRatio};
pub use rays::{
    almost_geodesic_check, extend_ray, parse_epsilon, weakly_geodesic_check, GeodesicRay,
    RayCheck, RayViolation,
};
pub use scan::{
    canonical_midpoint, nonbusemann_witness, pathsjoin_check, rigid_scan, tail_bound_estimate, tail_threshold_check,
    tail_bound_trend, verify_certificate, verify_tail_bound, NonBusemannCertificate,
    PathsJoinReport, RigidScan, SideBound, TailBoundRecord, TailBoundTrend, Trend,
    WitnessOutcome,
};
