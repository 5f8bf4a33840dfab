//! The fixed-point iteration used by current IRS guidance, reproduced with its
//! failure modes intact.
//!
//! Starting from `(C1, D1) = ($0, Q)`, each step sets
//! `(C[n+1], D[n+1]) = (PTC(D[n]), Q - PTC(D[n]))`, where `Q` is the premium
//! balance actually billed. The sequence "converges" once two successive
//! points differ by less than $1 in both coordinates. Under rounding every
//! point sits on a finite lattice, so a sequence that never converges must
//! eventually revisit a state; that revisit is reported as divergence.

use std::collections::HashMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::IterationError;
use crate::money::{round_cents, Money};
use crate::ptc::{ptc_of_deduction, PtcContext};

/// Successive points closer than this (sup norm) count as converged.
pub const CONVERGENCE_GAP: Money = Money::ONE_DOLLAR;

pub const DEFAULT_MAX_ITER: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IterationPoint {
    pub n: usize,
    /// Credit coordinate.
    pub c: Money,
    /// Deduction coordinate.
    pub d: Money,
}

impl IterationPoint {
    pub fn start(c: Money, d: Money) -> Self {
        IterationPoint { n: 1, c, d }
    }

    /// `max(|dc|, |dd|)`.
    pub fn gap(&self, other: &IterationPoint) -> Money {
        (self.c - other.c).abs().max((self.d - other.d).abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationStatus {
    ConvergedIrsSense,
    DivergedDoNotUse,
    BudgetExhausted,
}

/// The repeating tail of a divergent trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    pub period: usize,
    pub points: Vec<IterationPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationOutcome {
    pub status: IterationStatus,
    pub trace: Vec<IterationPoint>,
    /// The point `(C[n], D[n])` whose successor lies within $1.
    pub settled: Option<IterationPoint>,
    pub liminf_d: Option<Money>,
    pub cycle: Option<Cycle>,
    /// The start was pulled below `Q` to keep the first evaluation eligible.
    pub start_clamped: bool,
}

/// One application of the map `G(c, d) = (PTC(d), Q - PTC(d))`.
///
/// The deduction coordinate never goes below zero.
pub fn step_g(ctx: &PtcContext, point: IterationPoint) -> IterationPoint {
    let c = ptc_of_deduction(ctx, point.d);
    let d = (ctx.billed_premium() - c).max(Money::ZERO);
    IterationPoint { n: point.n + 1, c, d: round_cents(d.cents() as i128, 1, ctx.rounding) }
}

/// `($0, Q)` when the household stays eligible at `D = Q`; otherwise the
/// deduction starts at the largest eligible value. Returns the point and
/// whether it was clamped.
///
/// An unclamped start is rounded like every later deduction, so that
/// `D3 = D1` whenever `C2 = 0`.
pub fn default_start(ctx: &PtcContext) -> (IterationPoint, bool) {
    let billed = ctx.billed_premium();
    match ctx.eligibility_limit() {
        Some(limit) if limit < billed => (IterationPoint::start(Money::ZERO, limit), true),
        _ => (IterationPoint::start(Money::ZERO, round_cents(billed.cents() as i128, 1, ctx.rounding)), false),
    }
}

/// Iterate from `start` for at most `max_iter` applications of `G`.
pub fn run_iteration(
    ctx: &PtcContext,
    start: IterationPoint,
    max_iter: usize,
) -> Result<IterationOutcome, IterationError> {
    if max_iter < 2 {
        return Err(IterationError::Budget);
    }
    let mut trace = vec![start];
    let mut seen = HashMap::from([((start.c, start.d), 0usize)]);
    let mut current = start;

    for _ in 0..max_iter {
        let next = step_g(ctx, current);
        trace.push(next);
        if next.gap(&current) < CONVERGENCE_GAP {
            return Ok(IterationOutcome {
                status: IterationStatus::ConvergedIrsSense,
                trace,
                settled: Some(current),
                liminf_d: Some(current.d),
                cycle: None,
                start_clamped: false,
            });
        }
        if let Some(&first) = seen.get(&(next.c, next.d)) {
            let points = trace[first..trace.len() - 1].to_vec();
            let liminf = points.iter().map(|p| p.d).min();
            return Ok(IterationOutcome {
                status: IterationStatus::DivergedDoNotUse,
                trace,
                settled: None,
                liminf_d: liminf,
                cycle: Some(Cycle { period: points.len(), points }),
                start_clamped: false,
            });
        }
        seen.insert((next.c, next.d), trace.len() - 1);
        current = next;
    }

    Ok(IterationOutcome {
        status: IterationStatus::BudgetExhausted,
        trace,
        settled: None,
        liminf_d: None,
        cycle: None,
        start_clamped: false,
    })
}

/// [`run_iteration`] from [`default_start`].
pub fn run_default_iteration(ctx: &PtcContext, max_iter: usize) -> Result<IterationOutcome, IterationError> {
    let (start, clamped) = default_start(ctx);
    let mut outcome = run_iteration(ctx, start, max_iter)?;
    outcome.start_clamped = clamped;
    Ok(outcome)
}

/// The simplified method: deduct `D2` and claim `C3`.
pub fn simplified_method(ctx: &PtcContext) -> (Money, Money) {
    let (start, _) = default_start(ctx);
    let second = step_g(ctx, start);
    let third = step_g(ctx, second);
    (second.d, third.c)
}

/// `liminf D[n]`: the settled deduction, or the smallest deduction on the
/// cycle.
pub fn liminf_deduction(outcome: &IterationOutcome) -> Result<Money, IterationError> {
    match outcome.status {
        IterationStatus::BudgetExhausted => Err(IterationError::BudgetExhausted(outcome.trace.len() - 1)),
        _ => {
            if let Some(p) = outcome.settled {
                return Ok(p.d);
            }
            outcome
                .cycle
                .as_ref()
                .and_then(|c| c.points.iter().map(|p| p.d).min())
                .ok_or(IterationError::BudgetExhausted(outcome.trace.len() - 1))
        }
    }
}

/// Write `n,c,d` rows with a header.
pub fn write_trace_csv<W: Write>(trace: &[IterationPoint], mut out: W) -> io::Result<()> {
    writeln!(out, "n,c,d")?;
    for p in trace {
        writeln!(out, "{},{},{}", p.n, p.c, p.d)?;
    }
    Ok(())
}

/// Whether `D2 <= D4 <= D6 <= ...` holds along a trace whose first point has
/// index 1.
pub fn even_deductions_nondecreasing(trace: &[IterationPoint]) -> bool {
    let evens: Vec<Money> = trace.iter().filter(|p| p.n % 2 == 0).map(|p| p.d).collect();
    evens.windows(2).all(|w| w[0] <= w[1])
}
