//! Runs every randomized identity suite once with a small instance count.

use rmshin::cli::cmd_verify;

fn main() -> rmshin::Result<()> {
    let report = cmd_verify(7, 5, 128)?;
    for (name, suite) in &report.suites {
        let failed: Vec<_> = suite
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        println!(
            "{name}: {} checks, failures {:?}",
            suite.checks.len(),
            failed
        );
    }
    println!("overall: {}", if report.pass() { "pass" } else { "fail" });
    Ok(())
}
