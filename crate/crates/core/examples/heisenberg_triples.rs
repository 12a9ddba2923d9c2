//! Tail-free triples and geodesic rays in the discrete Heisenberg group.

use horobound::boundary::{nonbusemann_witness, WitnessOutcome};
use horobound::graph::{count_geodesics, is_geodesic_path, make_triple, shares_tail, Limits, NeighborOracle};
use horobound::group::{builtin_oracle, GraphDescriptor, Heisenberg};

fn main() -> horobound::Result<()> {
    let limits = Limits::default();
    let g = builtin_oracle(&GraphDescriptor::parse("heisenberg:std")?)?;
    let e = g.origin();
    let x = g.resolve("abAB")?;
    for j in 2..=5 {
        let c = g.resolve(&format!("b^{}ab", j - 1))?;
        let t = make_triple(&*g, &e, &x, &c, 64, &limits)?;
        println!(
            "j = {j}: c = {}, perimeter {}, shared tail {}, paths e->c {}, x->c {}",
            g.label(&c),
            t.perimeter,
            shares_tail(&*g, &e, &x, &c, 64, &limits)?,
            count_geodesics(&*g, &e, &c, 64, &limits)?,
            count_geodesics(&*g, &x, &c, 64, &limits)?,
        );
    }

    let ray: Vec<_> = (0..=10).map(|t| Heisenberg::key(t, 1, 1)).collect();
    println!("(t, 1, 1) is geodesic: {}", is_geodesic_path(&*g, &ray, &limits)?);

    match nonbusemann_witness(&*g, &e, &x, 8, 3, &limits)? {
        WitnessOutcome::Certificate(c) => println!("certificate perimeters {:?}", c.perimeters()),
        WitnessOutcome::NoneFound { perimeters, .. } => println!("only perimeters {perimeters:?}"),
    }
    Ok(())
}
