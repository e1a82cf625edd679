//! The built-in verification suites.

use metric_magnitude::verify::{run_suite, Suite};

fn main() {
    let report = run_suite(Suite::All);
    for c in &report.checks {
        println!("{:<22} {}  {}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
