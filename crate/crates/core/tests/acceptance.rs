//! Acceptance battery. Runs every criterion, printing one PASS/FAIL line
//! each, and exits non-zero if any fails. Runs without the libtest harness
//! so the lines are always visible.

use std::process::ExitCode;

use fracdyn_core::selftest::run_criterion;

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=11u8 {
        match run_criterion(id) {
            Ok(outcome) => {
                println!("{}", outcome.line());
                if !outcome.passed {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("FAIL {id:>2} could not run: {e}");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} of 11 criteria failed");
        return ExitCode::FAILURE;
    }
    println!("acceptance: all 11 criteria passed");
    ExitCode::SUCCESS
}
