//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;
use std::time::Duration;

use rankforge::ctx::Ctx;
use rankforge_cli::suite::{self, Status};

fn pinned() {
    assert_eq!(suite::TOLERANCE, 0);
    assert_eq!(suite::GOWERS_SAMPLES, 100);
    assert_eq!(suite::GOWERS_TIME_LIMIT, Duration::from_secs(300));
    assert_eq!(suite::STAR_TIME_LIMIT, Duration::from_secs(600));
    assert_eq!(suite::STAR_MAX_N, 3);
    assert_eq!(suite::DETERMINISM_WORKERS, [1, 8]);
    assert_eq!(suite::SUITE_BUDGET, 10_000_000_000);
}

fn main() -> ExitCode {
    pinned();
    println!(
        "acceptance: tolerance {}, {} samples per Gowers class, budget {}, workers {:?}",
        suite::TOLERANCE,
        suite::GOWERS_SAMPLES,
        suite::SUITE_BUDGET,
        suite::DETERMINISM_WORKERS
    );
    let outcomes = suite::run_suite(&[], &Ctx::new(suite::SUITE_BUDGET, 8));
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.status == Status::Pass).count();
    println!("acceptance: {passed}/{} criteria pass", outcomes.len());

    // a tiny budget must refuse, never report a failure
    let tiny = suite::run_suite(&[1, 8, 11], &Ctx::new(1_000, 1));
    let refusals_ok = tiny.iter().all(|o| o.status == Status::Refused);
    println!("budget refusal check: {}", if refusals_ok { "ok" } else { "FAILED" });

    if outcomes.len() == 15 && passed == 15 && refusals_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
