//! Solve against a parameter file instead of the bundled tables.
//!
//! Run with `cargo run --example custom_params -- path/to/params.toml`;
//! without an argument the bundled 2019 document is written out and read back.

use std::path::PathBuf;

use circular_ptc::{load_tax_year_params, optimal_deduction, Money, PtcContext, RoundingMode, Scenario, TaxYearParams};

fn main() {
    let text = match std::env::args().nth(1).map(PathBuf::from) {
        Some(path) => std::fs::read_to_string(path).unwrap(),
        None => TaxYearParams::bundled("2019").unwrap().to_document(),
    };
    println!("{text}");
    let params = load_tax_year_params(&text).unwrap();
    let household = Scenario::simple(
        Money::from_dollars(16_460),
        Money::from_dollars(10_390),
        Money::from_dollars(10_390),
        Money::from_dollars(70_000),
        &params.year,
    );
    let ctx = PtcContext::new(household, params, RoundingMode::Cent).unwrap();
    let sol = optimal_deduction(&ctx).unwrap();
    println!("d = {}, PTC = {}", sol.d.pretty(), sol.ptc.pretty());
}
