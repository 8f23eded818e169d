//! Run every acceptance check and print a summary.

use invosc::validation::run_checks;

fn main() -> invosc::Result<()> {
    let checks = run_checks()?;
    for c in &checks {
        println!(
            "[{}] criterion {:2} {:<36} observed {:.6e} expected {:.6e}",
            if c.passed() { "pass" } else { "FAIL" },
            c.criterion,
            c.name,
            c.observed,
            c.expected
        );
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    println!("{} of {} checks pass", checks.len() - failed, checks.len());
    Ok(())
}
