//! One line per acceptance criterion; fails if any criterion fails.
//!
//! Runs without the libtest harness so every line is printed even when
//! all pass. `HKIT_SEED` overrides the gauge seed.

use hkit::acceptance::{run_suite, Suite, DEFAULT_SEED};

fn main() {
    let seed = std::env::var("HKIT_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED);
    let results = run_suite(Suite::All, seed);
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("acceptance: {} checks, {} failed {:?}", results.len(), failed.len(), failed);
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
