use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs, Limits, NeighborOracle, VertexKey};

/// Exact extreme distance ratios between two metrics on a common vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipschitzRatio {
    pub graph_a: String,
    pub graph_b: String,
    pub radius: u32,
    pub pairs: usize,
    /// `max d_B / d_A`.
    pub b_over_a: Ratio<u64>,
    /// `max d_A / d_B`.
    pub a_over_b: Ratio<u64>,
}

/// Maximises `d_B/d_A` and `d_A/d_B` over all pairs in the ball of radius
/// `radius` about `A`'s origin (measured in `A`). Both oracles must use the
/// same vertex keys.
pub fn lipschitz_ratio(
    a: &dyn NeighborOracle,
    b: &dyn NeighborOracle,
    radius: u32,
    limits: &Limits,
) -> Result<LipschitzRatio> {
    let ball_a = bfs(a, &a.origin(), radius, limits)?;
    let mut keys: Vec<VertexKey> = ball_a.vertices().cloned().collect();
    keys.sort();
    if keys.len() < 2 {
        return Err(Error::invalid("ball has fewer than two vertices"));
    }
    let rows: Vec<(Ratio<u64>, Ratio<u64>, usize)> = keys
        .par_iter()
        .enumerate()
        .map(|(i, x)| -> Result<_> {
            let rest = &keys[i + 1..];
            let fa = bfs(a, x, 2 * radius, limits)?;
            let mut rb = 2 * radius.max(1);
            let fb = loop {
                let f = bfs(b, x, rb, limits)?;
                if rest.iter().all(|y| f.contains(y)) {
                    break f;
                }
                if f.frontier_complete() {
                    return Err(Error::invalid(format!(
                        "{} does not connect the ball of {}",
                        b.descriptor(),
                        a.descriptor()
                    )));
                }
                rb *= 2;
            };
            let mut hi = Ratio::from_integer(0);
            let mut lo = Ratio::from_integer(0);
            for y in rest {
                let da = fa.dist(y).expect("ball pair within twice the radius") as u64;
                let db = fb.dist(y).expect("found above") as u64;
                hi = hi.max(Ratio::new(db, da));
                lo = lo.max(Ratio::new(da, db));
            }
            Ok((hi, lo, rest.len()))
        })
        .collect::<Result<_>>()?;
    let b_over_a = rows.iter().map(|r| r.0).max().expect("rows");
    let a_over_b = rows.iter().map(|r| r.1).max().expect("rows");
    Ok(LipschitzRatio {
        graph_a: a.descriptor(),
        graph_b: b.descriptor(),
        radius,
        pairs: rows.iter().map(|r| r.2).sum(),
        b_over_a,
        a_over_b,
    })
}
