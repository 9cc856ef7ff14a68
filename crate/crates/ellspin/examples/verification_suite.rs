//! Run the full named verification suite programmatically — the same
//! registry behind `ellspin verify` — and print one line per check.
//!
//! Run:
//!   cargo run --release --example verification_suite

use ellspin::harness::{run_suite, Overrides, Suite};

fn main() {
    let results = run_suite(Suite::All, 1, &Overrides::default());
    let mut failed = 0;
    for r in &results {
        println!(
            "{} {:<32} residual {:>12.3e}  tolerance {:>8.1e}  [{} ms]",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.residual,
            r.tolerance,
            r.runtime_ms
        );
        if !r.pass {
            failed += 1;
        }
    }
    println!("\n{} checks, {} failed", results.len(), failed);
    std::process::exit(if failed == 0 { 0 } else { 1 });
}
