//! Applicable figure tables for the bundled years, at the knots and in between.
//!
//! Run with `cargo run --example figure_tables`.

use circular_ptc::{applicable_figure, ExactRatio, Money, TaxYearParams};

fn main() {
    let ms = [100, 120, 133, 140, 150, 175, 200, 225, 250, 275, 300, 350, 400];
    for year in TaxYearParams::bundled_years() {
        let params = TaxYearParams::bundled(year).unwrap();
        println!("{year}");
        for m in ms {
            let r = ExactRatio::from_hundredths(m);
            let exact = applicable_figure(r, &params.figure_table, false).unwrap();
            let rounded = applicable_figure(r, &params.figure_table, true).unwrap();
            println!(
                "  m = {:.2}   f = {:<10}  quantized {}",
                m as f64 / 100.0,
                exact.to_decimal_string(6),
                rounded.to_decimal_string(4)
            );
        }
    }
    // just below the jump the figure is still flat at the first value
    let p18 = TaxYearParams::bundled("2018").unwrap();
    let below = applicable_figure(
        ExactRatio::new(Money::from_cents(13_299), Money::from_cents(10_000)),
        &p18.figure_table,
        false,
    )
    .unwrap();
    println!("2018 at m = 1.3299: {}", below.to_decimal_string(4));
}
