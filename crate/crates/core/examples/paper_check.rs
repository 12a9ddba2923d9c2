//! Runs the check suite, optionally filtered: `cargo run --release
//! --example paper_check -- gamma1`.

use horobound::report::check::{paper_check, CheckOptions};

fn main() -> horobound::Result<()> {
    let opts = CheckOptions {
        only: std::env::args().nth(1),
        ..CheckOptions::default()
    };
    let summary = paper_check(&opts, |r| println!("{r}"))?;
    print!("{}", summary.table().lines().last().unwrap_or_default());
    println!();
    Ok(())
}
