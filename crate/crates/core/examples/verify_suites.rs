//! Runs every verification suite and prints one line per suite.
//!
//! Run with `cargo run --release --example verify_suites [seed]`.

use hencky::verify::run_suites;
use hencky::{MaterialParams, ToleranceSet};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let report = run_suites(&["all".to_string()], &MaterialParams::default(), &ToleranceSet::default(), seed).unwrap();
    for s in &report.suites {
        println!("{:<20} {}  {}", s.suite, if s.pass { "pass" } else { "FAIL" }, s.property);
    }
}
