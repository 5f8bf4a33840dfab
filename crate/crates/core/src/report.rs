//! Reports behind the `solve`, `iterate`, `compare` and `scan` commands.
//!
//! Each report is a plain serde type. JSON output is `serde_json` pretty
//! printing of the report, so parsing it back and printing again reproduces
//! the same bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{brute_force_max_feasible, ScanInterval};
use crate::bisection::{optimal_deduction, Solution, SolveMethod};
use crate::error::{IterationError, SearchError};
use crate::iteration::{run_default_iteration, simplified_method, Cycle, IterationPoint, IterationStatus};
use crate::money::{Money, RoundingMode};
use crate::ptc::{ptc_of_deduction, PtcContext};
use crate::reconcile::{reconcile, NetOutcome, RepaymentLimit};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub q: Money,
    /// `d + PTC(d)`.
    pub g_at_d: Money,
    pub next_d: Option<Money>,
    pub next_g: Option<Money>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub tax_year: String,
    pub mode: RoundingMode,
    pub d: Money,
    pub ptc: Money,
    pub method: SolveMethod,
    pub whole_dollars: bool,
    pub upper: Money,
    pub iterations: usize,
    pub certificate: CertificateReport,
    /// Present when advance credit was paid.
    pub reconciliation: Option<NetOutcome>,
}

impl SolveReport {
    pub fn new(ctx: &PtcContext, whole_dollars: bool) -> Result<Self, SearchError> {
        let mut solution = optimal_deduction(ctx)?;
        if whole_dollars {
            let (d, ptc) = solution.whole_dollars(ctx);
            solution.d = d;
            solution.ptc = ptc;
        }
        Ok(Self::from_solution(ctx, &solution, whole_dollars))
    }

    pub fn from_solution(ctx: &PtcContext, solution: &Solution, whole_dollars: bool) -> Self {
        let q = ctx.purchased_premium();
        let g_at_d = ctx.g(solution.d);
        let next = match solution.method {
            SolveMethod::Bisection => {
                let next_d = (solution.d + Money::ONE_DOLLAR).min(solution.upper);
                Some((next_d, ctx.g(next_d)))
            }
            _ => None,
        };
        let holds = g_at_d <= q && next.is_none_or(|(_, g)| g > q);
        let reconciliation = (ctx.scenario.advance_credit > Money::ZERO).then(|| reconcile(ctx, solution));
        SolveReport {
            tax_year: ctx.scenario.tax_year.clone(),
            mode: ctx.rounding,
            d: solution.d,
            ptc: solution.ptc,
            method: solution.method,
            whole_dollars,
            upper: solution.upper,
            iterations: solution.iterations,
            certificate: CertificateReport { q, g_at_d, next_d: next.map(|n| n.0), next_g: next.map(|n| n.1), holds },
            reconciliation,
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tax year      {} ({} rounding)", self.tax_year, self.mode);
        let _ = writeln!(s, "deduction d   {}", self.d.pretty());
        let _ = writeln!(s, "credit PTC    {}", self.ptc.pretty());
        let _ = writeln!(s, "method        {}", method_name(self.method));
        let c = &self.certificate;
        let _ = writeln!(s, "certificate   d + PTC(d) = {} <= Q = {}", c.g_at_d.pretty(), c.q.pretty());
        if let (Some(nd), Some(ng)) = (c.next_d, c.next_g) {
            let _ = writeln!(s, "              at {}: {} > Q", nd.pretty(), ng.pretty());
        }
        let _ = writeln!(s, "              {}", if c.holds { "holds" } else { "FAILS" });
        if let Some(r) = &self.reconciliation {
            s.push_str(&render_reconciliation(r));
        }
        s
    }
}

fn render_reconciliation(r: &NetOutcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "reconciliation");
    let _ = writeln!(s, "  advance credit     {}", r.advance_credit.pretty());
    let _ = writeln!(s, "  allowed credit     {}", r.ptc.pretty());
    if r.additional_credit > Money::ZERO {
        let _ = writeln!(s, "  additional credit  {}", r.additional_credit.pretty());
    }
    if r.repayment > Money::ZERO || r.ptc < r.advance_credit {
        let limit = match r.repayment_limit {
            RepaymentLimit::Limited(l) => l.pretty(),
            RepaymentLimit::Unlimited => "unlimited".to_string(),
        };
        let _ = writeln!(s, "  repayment          {} (limit {})", r.repayment.pretty(), limit);
    }
    if let Some(b) = r.total_benefit {
        let _ = writeln!(s, "  total benefit      {}", b.pretty());
    }
    s
}

pub fn method_name(m: SolveMethod) -> &'static str {
    match m {
        SolveMethod::Bisection => "bisection",
        SolveMethod::BoundaryB0 => "boundary_b0",
        SolveMethod::IneligibleFullDeduction => "ineligible_full_deduction",
    }
}

pub fn status_name(s: IterationStatus) -> &'static str {
    match s {
        IterationStatus::ConvergedIrsSense => "converged_irs_sense",
        IterationStatus::DivergedDoNotUse => "diverged_do_not_use",
        IterationStatus::BudgetExhausted => "budget_exhausted",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifiedReport {
    /// `D2`, the deduction taken.
    pub d: Money,
    /// `C3`, the credit taken.
    pub ptc: Money,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterateReport {
    pub tax_year: String,
    pub mode: RoundingMode,
    pub status: IterationStatus,
    pub steps: usize,
    pub start_clamped: bool,
    pub settled: Option<IterationPoint>,
    pub cycle: Option<Cycle>,
    pub liminf_d: Option<Money>,
    pub simplified: SimplifiedReport,
    /// Only with `--trace`.
    pub trace: Option<Vec<IterationPoint>>,
}

impl IterateReport {
    pub fn new(ctx: &PtcContext, max_iter: usize, with_trace: bool) -> Result<Self, IterationError> {
        let outcome = run_default_iteration(ctx, max_iter)?;
        let (d2, c3) = simplified_method(ctx);
        Ok(IterateReport {
            tax_year: ctx.scenario.tax_year.clone(),
            mode: ctx.rounding,
            status: outcome.status,
            steps: outcome.trace.len() - 1,
            start_clamped: outcome.start_clamped,
            settled: outcome.settled,
            cycle: outcome.cycle,
            liminf_d: outcome.liminf_d,
            simplified: SimplifiedReport { d: d2, ptc: c3 },
            trace: with_trace.then_some(outcome.trace),
        })
    }

    /// 0 converged, 4 diverged, 5 out of budget.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            IterationStatus::ConvergedIrsSense => 0,
            IterationStatus::DivergedDoNotUse => 4,
            IterationStatus::BudgetExhausted => 5,
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tax year      {} ({} rounding)", self.tax_year, self.mode);
        let plural = if self.steps == 1 { "" } else { "s" };
        let _ = writeln!(s, "status        {} after {} step{plural}", status_name(self.status), self.steps);
        if self.start_clamped {
            let _ = writeln!(s, "              start deduction clamped to the eligibility limit");
        }
        if let Some(trace) = &self.trace {
            let _ = writeln!(s, "trace");
            for p in trace {
                let _ = writeln!(s, "  {:>3}  C = {:>12}  D = {:>12}", p.n, p.c.pretty(), p.d.pretty());
            }
        }
        if let Some(p) = &self.settled {
            let _ = writeln!(s, "settled       C = {}  D = {}", p.c.pretty(), p.d.pretty());
        }
        if let Some(c) = &self.cycle {
            let pts: Vec<String> = c.points.iter().map(|p| format!("({}, {})", p.c.pretty(), p.d.pretty())).collect();
            let _ = writeln!(s, "cycle         period {}: {}", c.period, pts.join(" -> "));
        }
        if let Some(d) = self.liminf_d {
            let _ = writeln!(s, "liminf D      {}", d.pretty());
        }
        let _ = writeln!(s, "simplified    D2 = {}  C3 = {}", self.simplified.d.pretty(), self.simplified.ptc.pretty());
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodResult {
    pub d: Money,
    pub ptc: Money,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub tax_year: String,
    pub mode: RoundingMode,
    pub status: IterationStatus,
    /// The iteration's answer; absent unless it converged.
    pub irs: Option<MethodResult>,
    pub simplified: MethodResult,
    /// The smallest deduction the iteration visits, with its credit.
    pub liminf: Option<MethodResult>,
    pub bisection: MethodResult,
    pub method: SolveMethod,
    /// Brute-force scan on whole dollars.
    pub oracle: MethodResult,
    /// Bisection credit minus simplified credit.
    pub benefit_gap: Money,
}

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Iteration(#[from] IterationError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

impl CompareReport {
    pub fn new(ctx: &PtcContext, max_iter: usize) -> Result<Self, CompareError> {
        let outcome = run_default_iteration(ctx, max_iter)?;
        let irs = match (outcome.status, outcome.settled) {
            (IterationStatus::ConvergedIrsSense, Some(p)) => Some(MethodResult { d: p.d, ptc: p.c }),
            _ => None,
        };
        let liminf = outcome.liminf_d.map(|d| MethodResult { d, ptc: ptc_of_deduction(ctx, d) });
        let (d2, c3) = simplified_method(ctx);
        let solution = optimal_deduction(ctx)?;
        let oracle_d = brute_force_max_feasible(ctx, Money::ONE_DOLLAR);
        Ok(CompareReport {
            tax_year: ctx.scenario.tax_year.clone(),
            mode: ctx.rounding,
            status: outcome.status,
            irs,
            simplified: MethodResult { d: d2, ptc: c3 },
            liminf,
            bisection: MethodResult { d: solution.d, ptc: solution.ptc },
            method: solution.method,
            oracle: MethodResult { d: oracle_d, ptc: ptc_of_deduction(ctx, oracle_d) },
            benefit_gap: solution.ptc - c3,
        })
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tax year {} ({} rounding)", self.tax_year, self.mode);
        let _ = writeln!(s, "{:<22} {:>14} {:>14}", "method", "deduction", "credit");
        let mut row = |name: &str, r: Option<&MethodResult>, note: &str| {
            let _ = match r {
                Some(r) => writeln!(s, "{:<22} {:>14} {:>14}", name, r.d.pretty(), r.ptc.pretty()),
                None => writeln!(s, "{:<22} {:>29}", name, note),
            };
        };
        row("IRS iterative", self.irs.as_ref(), status_name(self.status));
        row("simplified (D2, C3)", Some(&self.simplified), "");
        row("liminf extension", self.liminf.as_ref(), "n/a");
        row("bisection", Some(&self.bisection), "");
        row("oracle ($1 lattice)", Some(&self.oracle), "");
        let _ = writeln!(s, "benefit gap {}", self.benefit_gap.pretty());
        s
    }
}

/// Interval summary printed after a scan.
pub fn render_intervals(intervals: &[ScanInterval]) -> String {
    let mut s = String::new();
    if intervals.is_empty() {
        s.push_str("no irs_diverges or equation_gap intervals\n");
    }
    for iv in intervals {
        let _ = writeln!(
            s,
            "{:<13} {} .. {} ({} points)",
            iv.kind.to_string(),
            iv.from.pretty(),
            iv.to.pretty(),
            iv.points
        );
    }
    s
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
}
