//! A student loan interest deduction that phases out with income feeds back
//! into household income. Raising the health insurance deduction restores
//! part of the student loan deduction, which raises the credit further.
//!
//! Run with `cargo run --example student_loan_chaining`.

use circular_ptc::{
    household_income, optimal_deduction, student_loan_deduction, Money, PtcContext, RoundingMode, Scenario,
};

fn main() {
    let mut s = Scenario::simple(
        Money::from_dollars(16_240),
        Money::from_dollars(10_390),
        Money::from_dollars(10_390),
        Money::from_dollars(72_000),
        "2018",
    );
    s.student_loan_k = Some(Money::from_dollars(2_500));
    let ctx = PtcContext::with_bundled_params(s.clone(), RoundingMode::Cent).unwrap();

    for d in [0, 1_000, 2_000, 3_000, 4_000, 5_000, 6_000] {
        let d = Money::from_dollars(d);
        let magi = s.income - d;
        println!(
            "d = {:>10}  student loan deduction {:>10}  household income {:>12}  d + PTC = {}",
            d.pretty(),
            student_loan_deduction(Money::from_dollars(2_500), magi).pretty(),
            household_income(&ctx, d).pretty(),
            ctx.g(d).pretty()
        );
    }
    let sol = optimal_deduction(&ctx).unwrap();
    println!("optimal d = {}, PTC = {}", sol.d.pretty(), sol.ptc.pretty());
}
