//! Loading a finite graph and looking at its triples.

use horobound::graph::{enumerate_geodesics, is_rigid_triple, FiniteGraph, Limits, NeighborOracle};

const HEXAGON: &str = r#"{
  "vertices": ["p0", "p1", "p2", "p3", "p4", "p5"],
  "edges": [[0,1],[1,2],[2,3],[3,4],[4,5],[5,0]]
}"#;

fn main() -> horobound::Result<()> {
    let limits = Limits::default();
    let g = FiniteGraph::from_json("hexagon", HEXAGON)?;
    let v = |s: &str| g.resolve(s);
    println!("{{p0, p2, p4}} rigid: {}", is_rigid_triple(&g, &v("p0")?, &v("p2")?, &v("p4")?, 6, &limits)?);
    let list = enumerate_geodesics(&g, &v("p0")?, &v("p3")?, 6, 10, &limits)?;
    for path in &list.paths {
        let labels: Vec<String> = path.iter().map(|k| g.label(k)).collect();
        println!("{}", labels.join(" "));
    }
    Ok(())
}
