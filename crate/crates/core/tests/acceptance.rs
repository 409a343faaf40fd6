//! One line per acceptance criterion. Runs under `cargo test`, which uses
//! the optimized test profile configured in the workspace.

use std::io::Write;

use tropint::verify::{run, VerifyConfig, CRITERIA};

#[test]
fn acceptance() {
    let cfg = VerifyConfig::default();
    let mut failed = Vec::new();
    // Written to the raw handle so the lines survive output capture.
    let mut err = std::io::stderr();
    let _ = writeln!(err);
    for id in 1..=CRITERIA {
        let check = run(id, &cfg);
        let _ = writeln!(err, "{}", check.line());
        if !check.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
