//! Optimal deduction by bisection, with the certificate that proves it.
//!
//! Run with `cargo run --example brooklyn_bisection`.

use circular_ptc::{optimal_deduction, Money, PtcContext, RoundingMode, Scenario};

fn main() {
    let household = Scenario::simple(
        Money::from_dollars(16_240),
        Money::from_dollars(10_390),
        Money::from_dollars(10_390),
        Money::from_dollars(71_150),
        "2018",
    );
    let q = household.purchased_premium;

    for mode in [RoundingMode::Dollar, RoundingMode::Cent] {
        let ctx = PtcContext::with_bundled_params(household.clone(), mode).unwrap();
        let sol = optimal_deduction(&ctx).unwrap();
        println!(
            "{mode} rounding: d = {}, PTC = {} after {} halvings",
            sol.d.pretty(),
            sol.ptc.pretty(),
            sol.iterations
        );
        println!("  d + PTC(d) = {} <= Q = {}", sol.certificate.g_at_d.pretty(), q.pretty());
        if let Some((next, g)) = sol.certificate.above {
            println!("  {} + PTC = {} > Q", next.pretty(), g.pretty());
        }
        let (d, ptc) = sol.whole_dollars(&ctx);
        println!("  filed in whole dollars: d = {}, PTC = {}", d.pretty(), ptc.pretty());
        for b in sol.trace.iter().take(4) {
            println!("  bracket [{}, {}]", b.0.pretty(), b.1.pretty());
        }
    }
}
