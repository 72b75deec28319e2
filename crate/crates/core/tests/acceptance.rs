//! Acceptance suite. Prints one PASS/FAIL line per criterion followed by its
//! individual checks, and exits non-zero if any criterion fails.
//!
//! `cargo test --test acceptance -- 3 6` runs only the listed criteria.

use std::process::ExitCode;

use noisestab::verify::{run, CRITERIA};

fn main() -> ExitCode {
    let requested: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u8> = if requested.is_empty() { CRITERIA.to_vec() } else { requested };
    let mut failed = Vec::new();
    for id in ids {
        match run(id) {
            Ok(report) => {
                println!("{}", report.summary());
                for line in &report.details {
                    println!("    {}", line);
                }
                if !report.passed {
                    failed.push(id);
                }
            }
            Err(err) => {
                println!("criterion {:>2} FAIL error: {}", id, err);
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {:?}", failed);
        ExitCode::FAILURE
    }
}
