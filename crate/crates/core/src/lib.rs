//! Desk-scale analysis of the horofunction boundary of infinite graphs,
//! in particular Cayley graphs of finitely generated groups.
//!
//! * [`graph`]: lazily expanded graphs, exact BFS metric, geodesic sets, and
//!   the shared-tail and rigid-triple predicates.
//! * [`group`]: group models and their Cayley graphs, Knuth-Bendix
//!   completion, Garside normal forms for braids.
//! * [`boundary`]: rigid-triple and tail-bound scans, non-Busemann
//!   certificates, horofunction fingerprints, ray checks.
//! * [`report`]: scenario execution, JSON/CSV reports, and the built-in
//!   check suite.

pub mod error;
pub mod graph;
pub mod group;
pub mod boundary;
pub mod report;

pub use error::{Error, Result};
