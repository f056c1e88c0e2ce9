//! Full acceptance run: one pass/fail line per criterion, nonzero exit on failure.

use std::process::ExitCode;

use synchro_cli::verify::{all_passed, run_suite, Level};

fn main() -> ExitCode {
    println!("\nrunning acceptance criteria");
    let results = run_suite(Level::Full, |r| println!("{r}"));
    let ids: Vec<usize> = results.iter().map(|r| r.id).collect();
    let complete = ids == (1..=10).collect::<Vec<_>>();
    let passed = results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria passed\n", results.len());
    if complete && all_passed(&results) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
