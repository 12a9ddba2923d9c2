//! Running a scenario, reloading the report and re-verifying it.

use horobound::graph::Limits;
use horobound::report::{run, verify, Operation, Params, Report, ScenarioSpec};

fn main() -> horobound::Result<()> {
    let limits = Limits::default();
    let spec = ScenarioSpec::new(
        "gamma1",
        Operation::Witness,
        Params {
            pair: Some(("(1,1)".into(), "(1,-1)".into())),
            radius: Some(10),
            count: Some(6),
            ..Params::default()
        },
    );
    let report = run(&spec, &limits)?;
    let text = report.to_json()?;
    let reloaded = Report::from_json(&text)?;
    println!("{} bytes of JSON", text.len());
    println!("{:?}", verify(&reloaded, &limits)?);
    print!("{}", reloaded.csv()?);
    Ok(())
}
