//! Acceptance gate: every criterion at its stated tolerance and runtime
//! budget, one PASS/FAIL line each.

use std::time::Instant;

use dyonosc_core::verify::{run_suite, Check, Suite, DEFAULT_SEED};

const TOTAL_BUDGET_SECS: f64 = 60.0;

fn threads() -> Option<usize> {
    std::env::var("DYONOSC_THREADS").ok().and_then(|v| v.parse().ok())
}

#[test]
fn acceptance_criteria() {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads().unwrap_or(0)).build().unwrap();
    let mut failures = Vec::new();
    let start = Instant::now();
    for suite in Suite::ALL {
        let t0 = Instant::now();
        let checks: Vec<Check> = pool.install(|| run_suite(suite, DEFAULT_SEED));
        let secs = t0.elapsed().as_secs_f64();
        let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
        let in_time = secs < suite.budget_secs();
        let ok = failed.is_empty() && !checks.is_empty() && in_time;
        println!(
            "{} criterion {} ({suite}): {} checks, {} failed, {secs:.2} s of {:.0} s",
            if ok { "PASS" } else { "FAIL" },
            suite.criterion(),
            checks.len(),
            failed.len(),
            suite.budget_secs(),
        );
        for c in &failed {
            println!("    {}: measured {:e} {:?} {:e} {}", c.name, c.measured, c.relation, c.tolerance, c.detail);
        }
        if !ok {
            failures.push(suite);
        }
    }
    let total = start.elapsed().as_secs_f64();
    println!("{} total runtime {total:.2} s of {TOTAL_BUDGET_SECS:.0} s", if total < TOTAL_BUDGET_SECS { "PASS" } else { "FAIL" });
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
    assert!(total < TOTAL_BUDGET_SECS);
}
