//! Run a built-in fixture suite and print the report as CSV.
//!
//! ```text
//! cargo run --release --example run_suite -- p5-table
//! ```

use dieudonne::harness::{emit, run_suite, FixtureSet, Format, Suite};

fn main() -> dieudonne::Result<()> {
    let name = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "etale-table".into());
    let suite: Suite = name.parse()?;
    let set = FixtureSet::builtin(suite)?;
    let report = run_suite(suite, &set, 0)?;
    print!("{}", emit(&report, Format::Csv, false)?);
    eprintln!(
        "{}: {} passed, {} failed",
        suite, report.passed, report.failed
    );
    Ok(())
}
