//! The three-row ladder: its three boundary classes, the row-0 class that
//! no geodesic reaches, and a certificate of growing tail-free triples.

use horobound::boundary::{busemann_reachability, fingerprints, nonbusemann_witness, Reachability, WitnessOutcome};
use horobound::graph::{Ladder, Limits, NeighborOracle};

fn main() -> horobound::Result<()> {
    let limits = Limits::default();
    let g = Ladder::gamma1();
    let base = g.resolve("(1,0)")?;
    let census = fingerprints(&g, &base, 3, &[10, 12], &limits)?;
    for class in census.stable_classes() {
        let w: Vec<String> = class.witnesses.values().flatten().map(|v| v.to_string()).collect();
        let reach = busemann_reachability(&g, &census, class, 10, &limits)?;
        let verdict = match reach {
            Reachability::Reachable { .. } => "reached by a geodesic",
            Reachability::UnreachableWithinRadius { .. } => "no geodesic of length 10",
        };
        println!("class {:?}: witnesses {w:?}, {verdict}", &class.values[..4]);
    }

    let (a, b) = (g.resolve("(1,1)")?, g.resolve("(1,-1)")?);
    if let WitnessOutcome::Certificate(cert) = nonbusemann_witness(&g, &a, &b, 12, 6, &limits)? {
        for t in &cert.triples {
            println!("{{{}, {}, {}}} perimeter {}", t.a, t.b, t.c, t.perimeter);
        }
    }
    Ok(())
}
