//! Rigid-triple scans: the hexagonal lattice has rigid triples of every
//! size, Z_2 * Z_3 only small ones, Z^2 none.

use horobound::boundary::rigid_scan;
use horobound::graph::{Limits, NeighborOracle};
use horobound::group::{builtin_oracle, GraphDescriptor};

fn main() -> horobound::Result<()> {
    let limits = Limits::default();
    for (name, radius) in [("hex", 4), ("free_product:2,3", 5), ("zd:2", 5)] {
        let g = builtin_oracle(&GraphDescriptor::parse(name)?)?;
        let scan = rigid_scan(&*g, &g.origin(), radius, None, &limits)?;
        println!("{name}: {} rigid triples in a ball of {}", scan.triples.len(), scan.ball_size);
        for b in &scan.by_min_side {
            println!("  shortest side {:>2}: {:>4} triples, largest perimeter {}", b.side, b.count, b.max_perimeter);
        }
    }
    Ok(())
}
