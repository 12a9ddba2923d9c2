use serde::{Deserialize, Serialize};

use crate::boundary::parse_epsilon;
use crate::error::{Error, Result};
use crate::graph::{bfs, Limits, NeighborOracle, VertexKey};
use crate::group::{builtin_oracle, GraphDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Ball,
    Geodesics,
    RigidScan,
    Pathsjoin,
    TailBound,
    Witness,
    Fingerprints,
    Reachability,
    WeaklyGeodesic,
    AlmostGeodesic,
    Lipschitz,
}

impl Operation {
    pub const ALL: [Operation; 11] = [
        Operation::Ball,
        Operation::Geodesics,
        Operation::RigidScan,
        Operation::Pathsjoin,
        Operation::TailBound,
        Operation::Witness,
        Operation::Fingerprints,
        Operation::Reachability,
        Operation::WeaklyGeodesic,
        Operation::AlmostGeodesic,
        Operation::Lipschitz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operation::Ball => "ball",
            Operation::Geodesics => "geodesics",
            Operation::RigidScan => "rigid-scan",
            Operation::Pathsjoin => "pathsjoin",
            Operation::TailBound => "tail-bound",
            Operation::Witness => "witness",
            Operation::Fingerprints => "fingerprints",
            Operation::Reachability => "reachability",
            Operation::WeaklyGeodesic => "weakly-geodesic",
            Operation::AlmostGeodesic => "almost-geodesic",
            Operation::Lipschitz => "lipschitz",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|op| op.name() == text.trim())
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|o| o.name()).collect();
                Error::invalid(format!("unknown operation {text:?}; expected one of {}", names.join(", ")))
            })
    }
}

impl std::fmt::Display for Operation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Operation parameters. Vertices are written as the graph resolves them:
/// generator words for groups, `(k,j)` for the ladders, labels for finite
/// graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
    /// Second radius for a tail-bound trend.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_radius: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_test: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annuli: Vec<u32>,
    /// A witness vertex whose fingerprint class is tested for reachability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_of: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_length: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sequence: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_radius: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    /// The second graph of a Lipschitz comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<String>,
    /// Distance cap for geodesic queries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    /// Maximum number of paths listed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
}

/// What to compute and on which graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub graph: String,
    pub operation: Operation,
    #[serde(default)]
    pub params: Params,
    /// Where the CLI writes the report; not part of the report itself.
    #[serde(default, skip_serializing)]
    pub output: Option<String>,
}

pub const DEFAULT_WITNESS_COUNT: usize = 4;
pub const DEFAULT_R_TEST: u32 = 3;
pub const DEFAULT_GEODESIC_CAP: u32 = 64;
pub const DEFAULT_PATH_LIMIT: usize = 100;
pub const DEFAULT_PROBE_RADIUS: u32 = 2;

/// A spec whose graph is built and whose vertices and parameters are
/// checked, ready to run.
pub(crate) struct Prepared {
    pub oracle: Box<dyn NeighborOracle>,
    pub task: Task,
}

pub(crate) enum Task {
    Ball { center: VertexKey, radius: u32 },
    Geodesics { from: VertexKey, to: VertexKey, cap: u32, limit: usize },
    RigidScan { center: VertexKey, radius: u32, side_cap: Option<u32> },
    Pathsjoin { center: VertexKey, radius: u32 },
    TailBound { a: VertexKey, b: VertexKey, radius: u32, outer: Option<u32> },
    Witness { a: VertexKey, b: VertexKey, radius: u32, count: usize },
    Fingerprints { base: VertexKey, r_test: u32, annuli: Vec<u32> },
    Reachability { base: VertexKey, r_test: u32, annuli: Vec<u32>, class_of: VertexKey, ray_length: u32 },
    WeaklyGeodesic { seq: Vec<VertexKey>, probes: Vec<VertexKey>, eps: String, start: usize },
    AlmostGeodesic { seq: Vec<VertexKey>, eps: String, start: usize },
    Lipschitz { other: Box<dyn NeighborOracle>, radius: u32 },
}

/// Splits `x,y,...` at commas outside parentheses, so ladder vertices such
/// as `(1,-1)` stay whole.
pub fn split_list(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Parses `x,y` into a vertex pair.
pub fn parse_pair(text: &str) -> Result<(String, String)> {
    match split_list(text).as_slice() {
        [x, y] => Ok((x.clone(), y.clone())),
        _ => Err(Error::invalid(format!("expected a pair \"x,y\", got {text:?}"))),
    }
}

fn need<T: Clone>(v: &Option<T>, what: &str, op: Operation) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::invalid(format!("operation {op} needs --{what}")))
}

fn positive(v: u32, what: &str) -> Result<u32> {
    if v == 0 {
        return Err(Error::invalid(format!("{what} must be positive")));
    }
    Ok(v)
}

impl ScenarioSpec {
    pub fn new(graph: impl Into<String>, operation: Operation, params: Params) -> Self {
        ScenarioSpec {
            graph: graph.into(),
            operation,
            params,
            output: None,
        }
    }

    /// Builds the graph, resolves every vertex and checks every parameter.
    /// Nothing expensive runs before this succeeds.
    pub(crate) fn prepare(&self) -> Result<Prepared> {
        let op = self.operation;
        let p = &self.params;
        let desc = GraphDescriptor::parse(&self.graph)?;
        let oracle = builtin_oracle(&desc)?;
        let g = &*oracle;
        let base = match &p.base {
            Some(b) => g.resolve(b)?,
            None => g.origin(),
        };
        let pair = |p: &Params| -> Result<(VertexKey, VertexKey)> {
            let (x, y) = need(&p.pair, "pair", op)?;
            let (a, b) = (g.resolve(&x)?, g.resolve(&y)?);
            if a == b {
                return Err(Error::Degenerate(format!("pair ({x}, {y}) names one vertex")));
            }
            Ok((a, b))
        };
        let annuli = |p: &Params| -> Result<(u32, Vec<u32>)> {
            let r_test = p.r_test.unwrap_or(DEFAULT_R_TEST);
            if p.annuli.is_empty() {
                return Err(Error::invalid(format!("operation {op} needs --annuli")));
            }
            if p.annuli.iter().any(|&r| r <= r_test) {
                return Err(Error::invalid("every annulus radius must exceed r_test"));
            }
            Ok((r_test, p.annuli.clone()))
        };
        let sequence = |p: &Params| -> Result<Vec<VertexKey>> {
            if p.sequence.is_empty() {
                return Err(Error::invalid(format!("operation {op} needs --sequence")));
            }
            p.sequence.iter().map(|v| g.resolve(v)).collect()
        };
        let epsilon = |p: &Params| -> Result<String> {
            let e = need(&p.epsilon, "epsilon", op)?;
            parse_epsilon(&e)?;
            Ok(e)
        };
        let task = match op {
            Operation::Ball => Task::Ball {
                center: base,
                radius: need(&p.radius, "radius", op)?,
            },
            Operation::Geodesics => {
                let (from, to) = pair(p)?;
                let limit = p.limit.unwrap_or(DEFAULT_PATH_LIMIT);
                if limit == 0 {
                    return Err(Error::invalid("path limit must be positive"));
                }
                Task::Geodesics {
                    from,
                    to,
                    cap: p.cap.unwrap_or(DEFAULT_GEODESIC_CAP),
                    limit,
                }
            }
            Operation::RigidScan => Task::RigidScan {
                center: base,
                radius: positive(need(&p.radius, "radius", op)?, "radius")?,
                side_cap: p.side_cap,
            },
            Operation::Pathsjoin => Task::Pathsjoin {
                center: base,
                radius: positive(need(&p.radius, "radius", op)?, "radius")?,
            },
            Operation::TailBound => {
                let (a, b) = pair(p)?;
                let radius = need(&p.radius, "radius", op)?;
                if let Some(o) = p.outer_radius {
                    if o <= radius {
                        return Err(Error::invalid("outer radius must exceed radius"));
                    }
                }
                Task::TailBound {
                    a,
                    b,
                    radius,
                    outer: p.outer_radius,
                }
            }
            Operation::Witness => {
                let (a, b) = pair(p)?;
                let count = p.count.unwrap_or(DEFAULT_WITNESS_COUNT);
                if count < 2 {
                    return Err(Error::invalid("witness count must be at least 2"));
                }
                Task::Witness {
                    a,
                    b,
                    radius: need(&p.radius, "radius", op)?,
                    count,
                }
            }
            Operation::Fingerprints => {
                let (r_test, annuli) = annuli(p)?;
                Task::Fingerprints { base, r_test, annuli }
            }
            Operation::Reachability => {
                let (r_test, annuli) = annuli(p)?;
                let class_of = g.resolve(&need(&p.class_of, "class-of", op)?)?;
                let ray_length = positive(need(&p.ray_length, "ray-length", op)?, "ray length")?;
                Task::Reachability {
                    base,
                    r_test,
                    annuli,
                    class_of,
                    ray_length,
                }
            }
            Operation::WeaklyGeodesic => {
                let seq = sequence(p)?;
                let eps = epsilon(p)?;
                let radius = p.probe_radius.unwrap_or(DEFAULT_PROBE_RADIUS);
                let probes = bfs(g, &seq[0], radius, &Limits::default())?
                    .vertices()
                    .cloned()
                    .collect();
                Task::WeaklyGeodesic {
                    seq,
                    probes,
                    eps,
                    start: p.start.unwrap_or(0),
                }
            }
            Operation::AlmostGeodesic => Task::AlmostGeodesic {
                seq: sequence(p)?,
                eps: epsilon(p)?,
                start: p.start.unwrap_or(0),
            },
            Operation::Lipschitz => {
                let other = builtin_oracle(&GraphDescriptor::parse(&need(&p.other, "other", op)?)?)?;
                Task::Lipschitz {
                    other,
                    radius: positive(need(&p.radius, "radius", op)?, "radius")?,
                }
            }
        };
        Ok(Prepared { oracle, task })
    }

    /// Checks the spec without running it.
    pub fn validate(&self) -> Result<()> {
        self.prepare().map(|_| ())
    }
}
