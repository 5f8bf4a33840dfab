//! Households that received advance credit during the year: optimal deduction
//! and what is owed or refunded at filing time.
//!
//! Run with `cargo run --example advance_credit_reconciliation`.

use circular_ptc::{
    optimal_deduction, reconcile, FilingStatus, Money, PtcContext, RepaymentLimit, RoundingMode, Scenario,
};

fn main() {
    for (aptc, income, status) in [
        (2_000, 71_150, FilingStatus::Single),
        (6_000, 71_150, FilingStatus::Single),
        (9_000, 40_000, FilingStatus::Single),
        (9_000, 40_000, FilingStatus::Other),
    ] {
        let mut s = Scenario::simple(
            Money::from_dollars(16_240),
            Money::from_dollars(10_390),
            Money::from_dollars(10_390),
            Money::from_dollars(income),
            "2018",
        );
        s.advance_credit = Money::from_dollars(aptc);
        s.filing_status = status;
        let ctx = PtcContext::with_bundled_params(s, RoundingMode::Cent).unwrap();
        let sol = optimal_deduction(&ctx).unwrap();
        let net = reconcile(&ctx, &sol);
        println!("I = ${income}, APTC = ${aptc}, {status:?}");
        println!("  d = {}, PTC = {} ({:?})", sol.d.pretty(), sol.ptc.pretty(), sol.method);
        if net.additional_credit > Money::ZERO {
            println!("  additional credit {}", net.additional_credit.pretty());
        } else {
            let limit = match net.repayment_limit {
                RepaymentLimit::Limited(l) => l.pretty(),
                RepaymentLimit::Unlimited => "none".to_string(),
            };
            println!(
                "  repay {} (limit {limit}), keep {}",
                net.repayment.pretty(),
                net.total_benefit.unwrap().pretty()
            );
        }
    }
}
