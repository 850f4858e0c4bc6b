use std::io::Write;

use conelab_core::audit::{run_criterion, CRITERIA};

#[test]
fn acceptance() {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=CRITERIA).map(|id| s.spawn(move || run_criterion(id))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    // written straight to stderr so the lines survive output capture
    let mut err = std::io::stderr().lock();
    for r in &results {
        writeln!(err, "{}", r.line()).ok();
    }
    let passed = results.iter().filter(|r| r.passed).count();
    writeln!(err, "acceptance: {passed}/{CRITERIA} criteria pass").ok();
    let failed: Vec<usize> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
