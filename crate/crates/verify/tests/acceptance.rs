//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

fn main() -> ExitCode {
    let seed = std::env::var("RELKIN_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(relkin_verify::DEFAULT_SEED);
    let report = relkin_verify::run_all(seed, None);
    for line in report.summary_lines() {
        println!("{line}");
    }
    if std::env::var_os("RELKIN_VERBOSE").is_some() {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    }
    let failed = report.criteria.iter().filter(|c| !c.pass).count();
    println!("acceptance: {} of {} criteria pass", report.criteria.len() - failed, report.criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
