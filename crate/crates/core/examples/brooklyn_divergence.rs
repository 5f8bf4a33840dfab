//! The IRS fixed-point iteration on a household where it cycles.
//!
//! Run with `cargo run --example brooklyn_divergence`.

use circular_ptc::iteration::{run_default_iteration, simplified_method, DEFAULT_MAX_ITER};
use circular_ptc::{IterationStatus, Money, PtcContext, RoundingMode, Scenario};

fn main() {
    let household = Scenario::simple(
        Money::from_dollars(16_240),
        Money::from_dollars(10_390),
        Money::from_dollars(10_390),
        Money::from_dollars(71_150),
        "2018",
    );
    // whole-dollar rounding reproduces the figures on the worksheets
    let ctx = PtcContext::with_bundled_params(household, RoundingMode::Dollar).unwrap();

    let outcome = run_default_iteration(&ctx, DEFAULT_MAX_ITER).unwrap();
    for p in &outcome.trace {
        println!("C{} = {:>8}   D{} = {:>8}", p.n, p.c.pretty(), p.n, p.d.pretty());
    }
    assert_eq!(outcome.status, IterationStatus::DivergedDoNotUse);
    let cycle = outcome.cycle.as_ref().unwrap();
    println!("cycle of period {}, iteration abandoned", cycle.period);

    let (d2, c3) = simplified_method(&ctx);
    println!("simplified method: deduct {} and claim {}", d2.pretty(), c3.pretty());
}
