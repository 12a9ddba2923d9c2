//! Locally finite graphs presented lazily through a neighbor oracle, and the
//! exact path metric on them.
//!
//! Vertices are identified by canonical byte keys ([`VertexKey`]). Every
//! enumerated output in this crate is ordered by key bytes, so results do not
//! depend on hashing or on thread scheduling.

mod bfs;
mod finite;
mod geodesic;
mod ladder;
mod local;
mod triple;

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub use bfs::{bfs, distance, DistanceField};
pub use finite::{FiniteGraph, FiniteGraphDoc};
pub use geodesic::{
    check_path, count_geodesics, enumerate_geodesics, geodesic_vertices, is_geodesic_path,
    GeodesicDag, GeodesicList, PathCheck,
};
pub use ladder::Ladder;
pub use local::LocalMetric;
pub use triple::{is_rigid_triple, make_triple, shares_tail, Triple};

use crate::error::{Error, Result};

/// Canonical byte key of a vertex. Two keys denote the same vertex iff their
/// bytes are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexKey(SmallVec<[u8; 24]>);

impl VertexKey {
    pub fn from_bytes(bytes: &[u8]) -> Self {
        VertexKey(SmallVec::from_slice(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() % 2 != 0 {
            return Err(Error::invalid(format!("odd-length hex key {s:?}")));
        }
        let bytes = (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16))
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map_err(|_| Error::invalid(format!("bad hex key {s:?}")))?;
        Ok(VertexKey::from_bytes(&bytes))
    }

    /// Starts an order-preserving encoding of integer coordinates.
    pub fn writer() -> KeyWriter {
        KeyWriter(SmallVec::new())
    }

    pub fn reader(&self) -> KeyReader<'_> {
        KeyReader {
            bytes: &self.0,
            pos: 0,
        }
    }
}

impl Serialize for VertexKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for VertexKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        VertexKey::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexKey({})", self.to_hex())
    }
}

/// Builds keys whose byte order matches the numeric order of the encoded
/// integers (sign bit flipped, big-endian).
pub struct KeyWriter(SmallVec<[u8; 24]>);

impl KeyWriter {
    pub fn i64(mut self, x: i64) -> Self {
        self.0.extend_from_slice(&((x as u64) ^ (1 << 63)).to_be_bytes());
        self
    }

    pub fn i32(mut self, x: i32) -> Self {
        self.0.extend_from_slice(&((x as u32) ^ (1 << 31)).to_be_bytes());
        self
    }

    pub fn u8(mut self, x: u8) -> Self {
        self.0.push(x);
        self
    }

    pub fn bytes(mut self, b: &[u8]) -> Self {
        self.0.extend_from_slice(b);
        self
    }

    pub fn finish(self) -> VertexKey {
        VertexKey(self.0)
    }
}

pub struct KeyReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl KeyReader<'_> {
    pub fn i64(&mut self) -> Result<i64> {
        let chunk = self.take(8)?;
        let raw = u64::from_be_bytes(chunk.try_into().expect("8 bytes"));
        Ok((raw ^ (1 << 63)) as i64)
    }

    pub fn i32(&mut self) -> Result<i32> {
        let chunk = self.take(4)?;
        let raw = u32::from_be_bytes(chunk.try_into().expect("4 bytes"));
        Ok((raw ^ (1 << 31)) as i32)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn rest(&mut self) -> &[u8] {
        let r = &self.bytes[self.pos..];
        self.pos = self.bytes.len();
        r
    }

    pub fn is_empty(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::invalid("truncated vertex key"));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
}

/// A vertex as it appears in reports: canonical key plus a display label.
///
/// The label never takes part in equality or ordering.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexRef {
    pub key: VertexKey,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl VertexRef {
    pub fn new(key: VertexKey, label: Option<String>) -> Self {
        VertexRef { key, label }
    }
}

impl PartialEq for VertexRef {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for VertexRef {}

impl PartialOrd for VertexRef {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexRef {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

impl std::hash::Hash for VertexRef {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => f.write_str(l),
            None => f.write_str(&self.key.to_hex()),
        }
    }
}

/// A connected, locally finite, undirected graph whose neighbor lists are
/// produced on demand.
///
/// Implementations must be pure functions of the key (or internally
/// synchronized): neighbor lists are symmetric, free of self-loops and
/// duplicates, and returned in the same order on every call.
pub trait NeighborOracle: Send + Sync {
    /// Short descriptor such as `zd:2` or `gamma1`.
    fn descriptor(&self) -> String;

    /// A distinguished base vertex (the identity for Cayley graphs).
    fn origin(&self) -> VertexKey;

    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey>;

    /// Upper bound on vertex degree, when known.
    fn valence_bound(&self) -> Option<usize>;

    fn label(&self, v: &VertexKey) -> String;

    /// Parses a human-written vertex (a generator word, a coordinate pair or
    /// a finite-graph label).
    fn resolve(&self, text: &str) -> Result<VertexKey>;

    fn vertex_ref(&self, v: &VertexKey) -> VertexRef {
        VertexRef::new(v.clone(), Some(self.label(v)))
    }
}

impl<T: NeighborOracle + ?Sized> NeighborOracle for Box<T> {
    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
    fn origin(&self) -> VertexKey {
        (**self).origin()
    }
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        (**self).neighbors(v)
    }
    fn valence_bound(&self) -> Option<usize> {
        (**self).valence_bound()
    }
    fn label(&self, v: &VertexKey) -> String {
        (**self).label(v)
    }
    fn resolve(&self, text: &str) -> Result<VertexKey> {
        (**self).resolve(text)
    }
}

impl<T: NeighborOracle + ?Sized> NeighborOracle for std::sync::Arc<T> {
    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
    fn origin(&self) -> VertexKey {
        (**self).origin()
    }
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        (**self).neighbors(v)
    }
    fn valence_bound(&self) -> Option<usize> {
        (**self).valence_bound()
    }
    fn label(&self, v: &VertexKey) -> String {
        (**self).label(v)
    }
    fn resolve(&self, text: &str) -> Result<VertexKey> {
        (**self).resolve(text)
    }
}

/// Resource caps. Exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of vertices held by a single distance field.
    pub max_vertices: usize,
    /// Maximum number of paths `enumerate_geodesics` may return.
    pub max_enumeration: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 5_000_000,
            max_enumeration: 10_000,
        }
    }
}

impl Limits {
    pub const ENV_MAX_VERTICES: &'static str = "HOROBOUND_MAX_VERTICES";
    pub const ENV_MAX_ENUMERATION: &'static str = "HOROBOUND_MAX_ENUMERATION";

    /// Defaults overridden by `HOROBOUND_MAX_VERTICES` and
    /// `HOROBOUND_MAX_ENUMERATION` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Ok(v) = std::env::var(Self::ENV_MAX_VERTICES) {
            limits.max_vertices = v
                .parse()
                .map_err(|_| Error::invalid(format!("{}={v:?}", Self::ENV_MAX_VERTICES)))?;
        }
        if let Ok(v) = std::env::var(Self::ENV_MAX_ENUMERATION) {
            limits.max_enumeration = v
                .parse()
                .map_err(|_| Error::invalid(format!("{}={v:?}", Self::ENV_MAX_ENUMERATION)))?;
        }
        Ok(limits)
    }
}

/// Spot-checks the oracle contract on the ball of the given radius: no
/// self-loops, no duplicate entries, symmetric adjacency, deterministic
/// neighbor lists. Returns the first violation found.
pub fn check_oracle_contract(
    oracle: &dyn NeighborOracle,
    center: &VertexKey,
    radius: u32,
    limits: &Limits,
) -> Result<()> {
    let field = bfs(oracle, center, radius, limits)?;
    for v in field.vertices() {
        let nbrs = oracle.neighbors(v);
        if nbrs != oracle.neighbors(v) {
            return Err(Error::Verification(format!(
                "neighbors of {} are not deterministic",
                oracle.label(v)
            )));
        }
        if let Some(bound) = oracle.valence_bound() {
            if nbrs.len() > bound {
                return Err(Error::Verification(format!(
                    "{} has {} neighbors, above the valence bound {bound}",
                    oracle.label(v),
                    nbrs.len()
                )));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for w in &nbrs {
            if w == v {
                return Err(Error::Verification(format!(
                    "self-loop at {}",
                    oracle.label(v)
                )));
            }
            if !seen.insert(w.clone()) {
                return Err(Error::Verification(format!(
                    "duplicate neighbor {} of {}",
                    oracle.label(w),
                    oracle.label(v)
                )));
            }
            if !oracle.neighbors(w).contains(v) {
                return Err(Error::Verification(format!(
                    "asymmetric edge {} -> {}",
                    oracle.label(v),
                    oracle.label(w)
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_encoding_preserves_integer_order() {
        let xs = [-5_i64, -1, 0, 1, 2, 1 << 40];
        let keys: Vec<_> = xs.iter().map(|&x| VertexKey::writer().i64(x).finish()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for (&x, k) in xs.iter().zip(&keys) {
            assert_eq!(k.reader().i64().unwrap(), x);
        }
    }

    #[test]
    fn labels_do_not_affect_equality() {
        let k = VertexKey::from_bytes(b"ab");
        let a = VertexRef::new(k.clone(), Some("x".into()));
        let b = VertexRef::new(k, Some("y".into()));
        assert_eq!(a, b);
    }

    #[test]
    fn hex_round_trip() {
        let k = VertexKey::from_bytes(&[0, 1, 0xfe, 0xff]);
        assert_eq!(k.to_hex(), "0001feff");
        assert_eq!(VertexKey::from_hex("0001feff").unwrap(), k);
        assert!(VertexKey::from_hex("abc").is_err());
    }
}
