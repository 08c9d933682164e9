//! Runs the claim-by-claim numeric checks and prints a verdict per suite.
//!
//! `cargo run --release --example verify -- 0.24 0.24 quick`

use screenlab::model::ModelParams;
use screenlab::verify::{run_all, VerifyOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let k = args.first().map(|s| s.parse()).transpose()?.unwrap_or(0.24);
    let c = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(0.24);
    let quick = args.iter().any(|a| a == "quick");
    let opts = VerifyOptions {
        params: ModelParams::new(k, c)?,
        quick,
    };
    for suite in run_all(&opts)? {
        println!(
            "{} {} (margin {:.3e})",
            if suite.passed() { "PASS" } else { "FAIL" },
            suite.name,
            suite.margin()
        );
        for check in &suite.checks {
            let mark = if check.passed { "ok  " } else { "FAIL" };
            println!("    {mark} {}: {}", check.name, check.detail);
        }
    }
    Ok(())
}
