use std::process::ExitCode;

use hnc_core::acceptance::{run_all, AcceptanceConfig};

fn main() -> ExitCode {
    let mut cfg = AcceptanceConfig::default();
    if let Some(seed) = std::env::var("HNC_SEED").ok().and_then(|s| s.parse().ok()) {
        cfg.seed = seed;
    }
    println!("acceptance (seed {})", cfg.seed);
    let results = run_all(&cfg);
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("{} passed, {} failed", results.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
