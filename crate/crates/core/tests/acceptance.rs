//! Runs every acceptance criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails or overruns its time limit.
//!
//! Criterion 3 runs on a single worker thread, matching its runtime budget.
//! Select criteria with `cargo test --test acceptance -- 1 2 9`.

use std::process::ExitCode;
use std::time::Instant;

use carlitz_core::repro::{run_criterion, time_limit_secs, CRITERIA};

fn main() -> ExitCode {
    let selected: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (id, name) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = if id == 3 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .expect("single-thread pool")
                .install(|| run_criterion(id))
        } else {
            run_criterion(id)
        };
        let secs = start.elapsed().as_secs_f64();
        let limit = time_limit_secs(id);
        let (passed, detail) = match result {
            Ok(r) => (r.passed && secs < limit as f64, r.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {name:<22} {} ({secs:.2}s, limit {limit}s) {detail}",
            if passed { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {failed} failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
