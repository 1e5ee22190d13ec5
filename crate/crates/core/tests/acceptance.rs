//! Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
//! Exits non-zero if any criterion fails.

use qcausal_core::acceptance;

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let report = acceptance::run_all(dir.path(), acceptance::CHECK_SEED);
    println!("\nacceptance criteria");
    for c in &report.criteria {
        println!("{}", c.line());
    }
    let failed = report.failed();
    if failed.is_empty() {
        println!("\nall {} criteria passed", report.criteria.len());
    } else {
        println!("\n{} of {} criteria failed: {:?}", failed.len(), report.criteria.len(), failed);
        std::process::exit(1);
    }
}
