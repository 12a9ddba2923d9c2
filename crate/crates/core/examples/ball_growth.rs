//! Sphere sizes and geodesic counts for a few Cayley graphs.

use horobound::graph::{bfs, GeodesicDag, Limits, NeighborOracle};
use horobound::group::{builtin_oracle, sphere_sizes, GraphDescriptor};

fn main() -> horobound::Result<()> {
    let limits = Limits::default();
    for name in ["zd:2", "hex", "free:2", "free_product:2,3", "heisenberg:std", "braid:3"] {
        let g = builtin_oracle(&GraphDescriptor::parse(name)?)?;
        let sizes = sphere_sizes(&*g, &g.origin(), 6, &limits)?;
        println!("{name:>18}: {sizes:?}");
    }

    // number of minimal paths from the identity in Z^2 is a binomial
    let g = builtin_oracle(&GraphDescriptor::parse("zd:2")?)?;
    let dag = GeodesicDag::new(bfs(&*g, &g.origin(), 8, &limits)?);
    for w in ["a^4b^4", "a^8", "a^3B^5"] {
        let v = g.resolve(w)?;
        println!("paths to {}: {}", g.label(&v), dag.count(&v).expect("inside the ball"));
    }
    Ok(())
}
