// Programmatic sweep producing the same CSV as `qleak sweep`.
//
//     cargo run --example leakage_sweep

use qleak::cli::{sweep_reports, sweep_row, Spacing, SweepRange, Table, SWEEP_HEADER};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let range = SweepRange {
        lo: 0.001,
        hi: 0.05,
        steps: 8,
        spacing: Spacing::Geometric,
    };
    let reports = sweep_reports(&range.ratios(), 10)?;
    let mut table = Table::new(&SWEEP_HEADER.split(',').collect::<Vec<_>>());
    for rep in &reports {
        table.push(sweep_row(rep));
    }
    print!("{}", table.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
