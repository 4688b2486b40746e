//! One line per acceptance criterion; exits non-zero if any criterion fails.

use geproci::suite::{run_all, DEFAULT_SEED};

fn main() {
    let start = std::time::Instant::now();
    let reports = run_all(DEFAULT_SEED);
    let mut failed = 0;
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2} ({})", r.id, r.group);
        for c in r.failures() {
            println!("     {}: {}", c.name, c.value);
        }
        failed += usize::from(!r.passed());
    }
    println!("{} of {} criteria passed in {:.1?}", reports.len() - failed, reports.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
