//! Credit for a household whose deduction does not interact with the credit:
//! a flat 9% applicable figure, benchmark premium $6,000, household income
//! $48,000.
//!
//! Run with `cargo run --example dutchess_credit`.

use circular_ptc::{ptc_base, FigureTable, Money, PtcContext, RoundingMode, Scenario, TaxYearParams};

fn main() {
    let params = TaxYearParams {
        year: "flat".into(),
        figure_table: FigureTable::constant(900).unwrap(),
        repayment_table: TaxYearParams::bundled("2018").unwrap().repayment_table,
    };
    let household = Scenario::simple(
        Money::from_dollars(12_000),
        Money::from_dollars(6_000),
        Money::from_dollars(6_000),
        Money::from_dollars(48_000),
        "flat",
    );
    let ctx = PtcContext::new(household, params, RoundingMode::Cent).unwrap();
    let ptc = ptc_base(&ctx, Money::from_dollars(48_000));
    println!("expected contribution 9% x $48,000 = $4,320");
    println!("PTC = $6,000 - $4,320 = {}", ptc.pretty());
    assert_eq!(ptc, Money::from_dollars(1_680));
}
