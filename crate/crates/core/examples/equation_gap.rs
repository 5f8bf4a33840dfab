//! Near m = 1.33 the applicable figure jumps, so `d + PTC(d)` can skip over
//! `Q`. No deduction meets the cap with equality, yet bisection still returns
//! the largest feasible one. This finds such an income and checks the answer
//! against every cent.
//!
//! Run with `cargo run --release --example equation_gap`.

use circular_ptc::analysis::{scan_divergence, IntervalKind, ScanConfig};
use circular_ptc::{optimal_deduction, Money, PtcContext, RoundingMode, Scenario, TaxYearParams};

fn main() {
    let template = Scenario::simple(
        Money::from_dollars(16_240),
        Money::from_dollars(10_390),
        Money::from_dollars(10_390),
        Money::from_dollars(30_000),
        "2018",
    );
    let params = TaxYearParams::bundled("2018").unwrap();
    let report = scan_divergence(
        &template,
        Money::from_dollars(20_000),
        Money::from_dollars(30_000),
        Money::from_dollars(25),
        &params,
        ScanConfig::default(),
    )
    .unwrap();
    let gap = report.intervals_of(IntervalKind::EquationGap).next().expect("a gap near m = 1.33");
    println!("equation gap over incomes {} .. {}", gap.from.pretty(), gap.to.pretty());

    let mut s = template.clone();
    s.income = gap.from;
    let ctx = PtcContext::new(s, params, RoundingMode::Cent).unwrap();
    let sol = optimal_deduction(&ctx).unwrap();
    let q = ctx.purchased_premium();
    let (next, g_next) = sol.certificate.above.unwrap();
    println!("d = {}: d + PTC = {} < Q = {}", sol.d.pretty(), sol.certificate.g_at_d.pretty(), q.pretty());
    println!("d' = {}: d' + PTC = {} > Q", next.pretty(), g_next.pretty());

    let upper = ctx.eligibility_limit().unwrap_or(ctx.billed_premium());
    let best = (0..=upper.cents()).map(Money::from_cents).filter(|&d| ctx.g(d) <= q).max().unwrap();
    println!("largest feasible cent by exhaustive check: {}", best.pretty());
    assert!(sol.d <= best && best - sol.d < Money::ONE_DOLLAR);
}
