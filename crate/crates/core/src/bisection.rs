//! Optimal deduction by bisection.
//!
//! `g(d) = d + PTC(d)` is monotone increasing and left continuous in `d`,
//! though it jumps where the applicable figure jumps and where the household
//! crosses into credit eligibility. Bisection still finds the largest `d`
//! with `g(d) <= Q`: keep `g(a) <= Q < g(b)` and halve `[a, b]` until it is
//! one lattice step wide. No root of `g(d) = Q` is needed, so the method also
//! works when that equation has no solution.

use serde::{Deserialize, Serialize};

use crate::error::SearchError;
use crate::money::{round_cents, Money, RoundingMode};
use crate::ptc::{ptc_of_deduction, PtcContext};

/// Bisection trace: the bracket `(a, b)` after each step.
pub type Bracket = (Money, Money);

/// Search for the largest lattice point `c` in `[lo, hi]` with `g(c) <= threshold`.
#[derive(Clone, Copy)]
pub struct ThresholdProblem<G> {
    pub g: G,
    pub lo: Money,
    pub hi: Money,
    pub threshold: Money,
    /// Stop once the bracket is no wider than this.
    pub tolerance: Money,
    /// Lattice for midpoints.
    pub midpoint_rounding: RoundingMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub value: Money,
    pub trace: Vec<Bracket>,
    /// Number of midpoint evaluations.
    pub iterations: usize,
    /// `g(hi) <= threshold`, so no bisection was needed.
    pub reached_hi: bool,
}

fn midpoint(a: Money, b: Money, rounding: RoundingMode) -> Money {
    round_cents((a.cents() + b.cents()) as i128, 2, rounding)
}

pub fn threshold_search<G: Fn(Money) -> Money>(problem: &ThresholdProblem<G>) -> Result<SearchOutcome, SearchError> {
    let ThresholdProblem { ref g, lo, hi, threshold, tolerance, midpoint_rounding } = *problem;
    if lo > hi {
        return Err(SearchError::InvertedBounds { lo, hi });
    }
    if tolerance < Money::ONE_CENT {
        return Err(SearchError::Tolerance);
    }
    let g_lo = g(lo);
    if g_lo > threshold {
        return Err(SearchError::StartAboveThreshold { value: g_lo, threshold });
    }
    let g_hi = g(hi);
    if g_hi <= threshold {
        return Ok(SearchOutcome { value: hi, trace: vec![(lo, hi)], iterations: 0, reached_hi: true });
    }

    let (mut a, mut b) = (lo, hi);
    let (mut g_a, mut g_b) = (g_lo, g_hi);
    let mut trace = vec![(a, b)];
    let mut iterations = 0;
    while b - a > tolerance {
        let c = midpoint(a, b, midpoint_rounding);
        if c <= a || c >= b {
            break;
        }
        let g_c = g(c);
        iterations += 1;
        if g_c <= threshold {
            if g_c < g_a {
                return Err(SearchError::NotMonotone { a, ga: g_a, b: c, gb: g_c });
            }
            a = c;
            g_a = g_c;
        } else {
            if g_c > g_b {
                return Err(SearchError::NotMonotone { a: c, ga: g_c, b, gb: g_b });
            }
            b = c;
            g_b = g_c;
        }
        trace.push((a, b));
    }
    Ok(SearchOutcome { value: a, trace, iterations, reached_hi: false })
}

/// Lattice the search runs on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Cent midpoints, one-cent tolerance.
    #[default]
    Cent,
    /// Whole-dollar midpoints, one-dollar tolerance; matches hand computation
    /// that rounds to the dollar after every step.
    Dollar,
}

impl Precision {
    pub fn for_rounding(mode: RoundingMode) -> Self {
        match mode {
            RoundingMode::Dollar => Precision::Dollar,
            _ => Precision::Cent,
        }
    }

    pub fn tolerance(self) -> Money {
        match self {
            Precision::Cent => Money::ONE_CENT,
            Precision::Dollar => Money::ONE_DOLLAR,
        }
    }

    pub fn midpoint_rounding(self) -> RoundingMode {
        match self {
            Precision::Cent => RoundingMode::Cent,
            Precision::Dollar => RoundingMode::Dollar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Bisection,
    /// The upper end of the search interval already satisfies the constraint.
    BoundaryB0,
    /// No deduction leaves the household eligible; deduct the full billed
    /// premium and take no credit.
    IneligibleFullDeduction,
}

/// Evidence that `d` is optimal, recomputed from scratch after the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// `g(d)`, at most `Q`.
    pub g_at_d: Money,
    /// `(d', g(d'))` with `d' = min(d + $1, b0)` and `g(d') > Q`; absent when
    /// `d` is the end of the search interval.
    pub above: Option<(Money, Money)>,
}

impl Certificate {
    pub fn holds(&self, purchased_premium: Money) -> bool {
        self.g_at_d <= purchased_premium && self.above.is_none_or(|(_, g)| g > purchased_premium)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub d: Money,
    pub ptc: Money,
    pub method: SolveMethod,
    pub certificate: Certificate,
    /// Upper end `b0` of the search interval.
    pub upper: Money,
    pub trace: Vec<Bracket>,
    pub iterations: usize,
}

impl Solution {
    /// Largest whole-dollar deduction not above `d`, with its credit.
    ///
    /// `g` is monotone, so the snapped value still satisfies the constraint.
    pub fn whole_dollars(&self, ctx: &PtcContext) -> (Money, Money) {
        match self.method {
            SolveMethod::IneligibleFullDeduction => (self.d.floor_dollars(), self.ptc),
            _ => {
                let d = self.d.floor_dollars();
                (d, ptc_of_deduction(ctx, d))
            }
        }
    }
}

fn certify(ctx: &PtcContext, d: Money, upper: Money, method: SolveMethod) -> Certificate {
    let above = match method {
        SolveMethod::Bisection => {
            let next = (d + Money::ONE_DOLLAR).min(upper);
            Some((next, ctx.g(next)))
        }
        _ => None,
    };
    Certificate { g_at_d: ctx.g(d), above }
}

fn ineligible(ctx: &PtcContext) -> Solution {
    let d = ctx.billed_premium();
    let ptc = ptc_of_deduction(ctx, d);
    Solution {
        d,
        ptc,
        method: SolveMethod::IneligibleFullDeduction,
        certificate: Certificate { g_at_d: d + ptc, above: None },
        upper: d,
        trace: Vec::new(),
        iterations: 0,
    }
}

fn solve_below(ctx: &PtcContext, upper: Money, precision: Precision) -> Result<Solution, SearchError> {
    let q = ctx.purchased_premium();
    let g = |d: Money| ctx.g(d);
    // PTC never exceeds Q, so g(0) <= Q; kept as a guard all the same
    if g(Money::ZERO) > q {
        return Ok(ineligible(ctx));
    }
    let outcome = threshold_search(&ThresholdProblem {
        g,
        lo: Money::ZERO,
        hi: upper,
        threshold: q,
        tolerance: precision.tolerance(),
        midpoint_rounding: precision.midpoint_rounding(),
    })?;
    let method = if outcome.reached_hi { SolveMethod::BoundaryB0 } else { SolveMethod::Bisection };
    let d = outcome.value;
    Ok(Solution {
        d,
        ptc: ptc_of_deduction(ctx, d),
        method,
        certificate: certify(ctx, d, upper, method),
        upper,
        trace: outcome.trace,
        iterations: outcome.iterations,
    })
}

/// No advance credit: search `[0, min(Q, I - F)]`.
///
/// Requires household income at a zero deduction to reach the poverty line
/// (or the exception); otherwise the household is reported ineligible.
pub fn solve_no_aptc(ctx: &PtcContext, precision: Precision) -> Result<Solution, SearchError> {
    match ctx.eligibility_limit() {
        Some(upper) => solve_below(ctx, upper, precision),
        None => Ok(ineligible(ctx)),
    }
}

/// Advance credit paid: search `[0, Q - APTC]`, using `f(1)` below the
/// poverty line when the exception applies and stopping at the eligibility
/// edge otherwise.
pub fn solve_with_aptc(ctx: &PtcContext, precision: Precision) -> Result<Solution, SearchError> {
    match ctx.eligibility_limit() {
        Some(upper) => solve_below(ctx, upper, precision),
        None => Ok(ineligible(ctx)),
    }
}

/// The largest deduction satisfying `d + PTC(d) <= Q`, at the precision
/// implied by the context's rounding mode.
pub fn optimal_deduction(ctx: &PtcContext) -> Result<Solution, SearchError> {
    optimal_deduction_with(ctx, Precision::for_rounding(ctx.rounding))
}

pub fn optimal_deduction_with(ctx: &PtcContext, precision: Precision) -> Result<Solution, SearchError> {
    if ctx.eligibility_limit().is_none() {
        return Ok(ineligible(ctx));
    }
    if ctx.scenario.advance_credit.cents() == 0 {
        solve_no_aptc(ctx, precision)
    } else {
        solve_with_aptc(ctx, precision)
    }
}
