//! Map the incomes where the IRS iteration breaks down, streaming CSV to
//! standard output.
//!
//! Run with `cargo run --release --example divergence_scan > scan.csv`.

use std::io::Write;

use circular_ptc::analysis::{csv_row, IntervalKind, ScanConfig, Scanner, CSV_HEADER};
use circular_ptc::{Money, Scenario, TaxYearParams};

fn main() {
    let template = Scenario::simple(
        Money::from_dollars(16_240),
        Money::from_dollars(10_390),
        Money::from_dollars(10_390),
        Money::from_dollars(75_000),
        "2018",
    );
    let params = TaxYearParams::bundled("2018").unwrap();
    let config = ScanConfig { refine: true, ..ScanConfig::default() };
    let scanner = Scanner::new(
        template,
        params,
        Money::from_dollars(60_000),
        Money::from_dollars(75_000),
        Money::from_dollars(50),
        config,
    )
    .unwrap();

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{CSV_HEADER}").unwrap();
    let intervals = scanner.run(|p| writeln!(out, "{}", csv_row(p, false))).unwrap();

    // 4F + f(4) * 4F: above this no deduction brings m under 4 with Q to spare
    let edge = 4.0 * 16_240.0 * (1.0 + 0.0956);
    for iv in intervals.iter().filter(|iv| iv.kind == IntervalKind::IrsDiverges) {
        eprintln!("iteration diverges on {} .. {} (edge estimate ${edge:.0})", iv.from.pretty(), iv.to.pretty());
    }
}
