//! Acceptance suite: one PASS/FAIL line per criterion, A1-A10.
//!
//! Runs without the libtest harness so the lines are always printed. The criteria run
//! concurrently; the process exits non-zero if any of them fails.

use std::process::ExitCode;

use pihier_core::acceptance::*;

/// A corrupted fixture must fail A1 with an error that names the file.
fn broken_fixture_is_named() -> Result<(), String> {
    let dir = std::env::temp_dir().join(format!("pihier-fixture-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("hierarchy_m0.json");
    std::fs::write(&path, "{\"vars\": [\"q\"], \"terms\": 3}").map_err(|e| e.to_string())?;
    let err = load_fixture(&path)
        .err()
        .map(|e| e.to_string())
        .unwrap_or_default();
    let a1_failed = !a1(&dir).passed();
    std::fs::remove_dir_all(&dir).map_err(|e| e.to_string())?;
    if err.contains("hierarchy_m0.json") && a1_failed {
        Ok(())
    } else {
        Err(format!("error `{err}`, A1 failed: {a1_failed}"))
    }
}

fn main() -> ExitCode {
    let fixtures = default_fixture_dir();
    let criteria: Vec<Box<dyn Fn() -> CriterionReport + Send + Sync>> = vec![
        Box::new(move || a1(&fixtures)),
        Box::new(a2),
        Box::new(a3),
        Box::new(a4),
        Box::new(a5),
        Box::new(a6),
        Box::new(a7),
        Box::new(a8),
        Box::new(a9),
        Box::new(a10),
    ];
    let reports: Vec<CriterionReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria.iter().map(|c| scope.spawn(c)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion panicked"))
            .collect()
    });
    for r in &reports {
        println!("{r}");
    }
    let broken = broken_fixture_is_named();
    match &broken {
        Ok(()) => println!("fixture errors name the offending path: PASS"),
        Err(e) => println!("fixture errors name the offending path: FAIL ({e})"),
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.id)
        .collect();
    println!(
        "acceptance: {} of {} criteria passed{}",
        reports.len() - failed.len(),
        reports.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failed: {}", failed.join(", "))
        }
    );
    if failed.is_empty() && broken.is_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
