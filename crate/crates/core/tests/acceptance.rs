//! Runs every criterion of the check suite and prints one line each.
//! Fails if any criterion fails; a skipped criterion carries its reason.

use horobound::report::check::{paper_check, CheckOptions, Status};

fn main() {
    let opts = CheckOptions::default();
    let summary = paper_check(&opts, |r| {
        println!("{:<7} criterion {:>2} ({:.2}s, limit {}s): {}: {}",
            r.status.to_string(), r.id, r.elapsed_ms as f64 / 1000.0, r.limit_ms / 1000, r.title, r.detail);
    })
    .expect("check suite runs");
    println!(
        "acceptance: {} passed, {} failed, {} skipped",
        summary.count(Status::Pass),
        summary.count(Status::Fail),
        summary.count(Status::Skipped)
    );
    if !summary.all_passed() {
        std::process::exit(1);
    }
}
