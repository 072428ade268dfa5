//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 1–15 come from the full profile of `verify_all`; criterion 16
//! times both profiles and runs the two deliberate mutations.

use std::process::ExitCode;
use std::time::Instant;

use qsm_cli::verify::{verify_all, Mutation, Profile, VerificationSuiteResult};

const QUICK_LIMIT_S: f64 = 60.0;
const FULL_LIMIT_S: f64 = 300.0;

/// Per-criterion runtime limits in seconds, where one is stated.
fn runtime_limit(criterion: u32) -> Option<f64> {
    match criterion {
        1 | 4 | 9 => Some(10.0),
        2 | 10 => Some(20.0),
        5 | 6 => Some(30.0),
        14 => Some(5.0),
        15 => Some(60.0),
        _ => None,
    }
}

fn line(ok: bool, label: &str, detail: &str) -> bool {
    println!("[{}] {label}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn timed(profile: Profile, mutation: Mutation) -> (VerificationSuiteResult, f64) {
    let start = Instant::now();
    let r = verify_all(profile, 0, mutation);
    (r, start.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let (full, full_s) = timed(Profile::Full, Mutation::None);
    let mut all = true;
    for criterion in 1..=15u32 {
        let checks: Vec<_> = full.checks.iter().filter(|c| c.criterion == Some(criterion)).collect();
        let secs: f64 = checks.iter().map(|c| c.runtime_ms as f64 / 1000.0).sum();
        let within_time = runtime_limit(criterion).is_none_or(|lim| secs < lim);
        let ok = !checks.is_empty() && checks.iter().all(|c| c.passed) && within_time;
        let detail: Vec<String> = checks
            .iter()
            .map(|c| format!("{} residual {:.3e} tol {:.3e} ({:.2}s) {}", c.name, c.residual, c.tolerance, secs, c.detail))
            .collect();
        let limit = runtime_limit(criterion).map_or(String::new(), |l| format!(" [limit {l}s]"));
        all &= line(ok, &format!("criterion {criterion:2}"), &format!("{}{limit}", detail.join("; ")));
    }
    for c in full.checks.iter().filter(|c| c.criterion.is_none()) {
        all &= line(c.passed, &format!("invariant {}", c.name), &c.detail);
    }

    let (quick, quick_s) = timed(Profile::Quick, Mutation::None);
    let (flip, _) = timed(Profile::Quick, Mutation::FlipFWeightSign);
    let (broken, _) = timed(Profile::Quick, Mutation::BreakComposition);
    let only_fails = |r: &VerificationSuiteResult, name: &str| {
        r.checks.iter().all(|c| c.passed != (c.name == name))
    };
    let ok16 = quick.passed
        && full.passed
        && quick_s < QUICK_LIMIT_S
        && full_s < FULL_LIMIT_S
        && only_fails(&flip, "haar-average")
        && only_fails(&broken, "class-group-axioms");
    all &= line(
        ok16,
        "criterion 16",
        &format!(
            "quick {quick_s:.1}s (< {QUICK_LIMIT_S}s, pass={}), full {full_s:.1}s (< {FULL_LIMIT_S}s, pass={}), \
             flip-f-weight-sign fails haar-average only: {}, break-composition fails class-group-axioms only: {}",
            quick.passed,
            full.passed,
            only_fails(&flip, "haar-average"),
            only_fails(&broken, "class-group-axioms"),
        ),
    );
    println!("acceptance: {}", if all { "ALL PASS" } else { "FAILURES" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
