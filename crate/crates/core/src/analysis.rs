//! Brute-force verification and income sweeps.
//!
//! [`brute_force_max_feasible`] walks the whole deduction lattice and is the
//! reference every solver result is checked against. [`Scanner`] sweeps the
//! income of a template household and records, for each income, how the
//! fixed-point iteration, the simplified method, bisection and the
//! brute-force scan fare.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bisection::{optimal_deduction, SolveMethod};
use crate::error::{ContextError, ScanError};
use crate::iteration::{run_default_iteration, simplified_method, IterationStatus, DEFAULT_MAX_ITER};
use crate::money::{Money, RoundingMode};
use crate::params::TaxYearParams;
use crate::ptc::{household_income, PtcContext};
use crate::scenario::Scenario;

/// Largest `d` on the lattice `0, step, 2 step, ..` (plus the domain's upper
/// end) with `d + PTC(d) <= Q`, scanning every point.
///
/// The domain is `[0, Q - APTC]`, cut off where household income would drop
/// below the poverty line unless the exception applies. A household that is
/// below the line even at `d = 0` gets the full billed premium.
pub fn brute_force_max_feasible(ctx: &PtcContext, step: Money) -> Money {
    assert!(step >= Money::ONE_CENT, "step must be positive");
    let billed = ctx.billed_premium();
    let q = ctx.purchased_premium();
    let in_domain = |d: Money| ctx.scenario.below_poverty_exception || household_income(ctx, d) >= ctx.poverty_line();
    if !in_domain(Money::ZERO) {
        return billed;
    }
    let mut best = Money::ZERO;
    let mut d = Money::ZERO;
    let mut last_in_domain = Money::ZERO;
    while d <= billed && in_domain(d) {
        if ctx.g(d) <= q {
            best = d;
        }
        last_in_domain = d;
        d += step;
    }
    // the exact end of the domain may sit between lattice points
    let end = if d > billed && in_domain(billed) { billed } else { domain_end(ctx, last_in_domain, d.min(billed)) };
    if end > last_in_domain && ctx.g(end) <= q {
        best = end;
    }
    best
}

/// Last cent in `[from, to]` still in the domain, walking cent by cent.
fn domain_end(ctx: &PtcContext, from: Money, to: Money) -> Money {
    let mut d = from;
    while d < to {
        let next = d + Money::ONE_CENT;
        if !(ctx.scenario.below_poverty_exception || household_income(ctx, next) >= ctx.poverty_line()) {
            break;
        }
        d = next;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrsStatus {
    Converged,
    Diverged,
    Exhausted,
}

impl fmt::Display for IrsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IrsStatus::Converged => "converged",
            IrsStatus::Diverged => "diverged",
            IrsStatus::Exhausted => "exhausted",
        })
    }
}

/// One income on the scan grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub income: Money,
    pub irs_status: IrsStatus,
    pub simplified_ptc: Money,
    pub bisection_ptc: Money,
    pub bisection_d: Money,
    pub bisection_method: SolveMethod,
    pub certificate_holds: bool,
    pub oracle_d: Money,
    /// Some `d` gets `d + PTC(d)` within $1 of `Q`.
    pub equation_solvable: bool,
    pub benefit_gap: Money,
}

impl ScanRecord {
    /// The iteration fails while bisection finds a positive credit.
    pub fn irs_diverges(&self) -> bool {
        self.irs_status == IrsStatus::Diverged && self.bisection_ptc > Money::ZERO
    }

    /// Bisection had to stop short of `g(d) = Q` because `g` jumps over `Q`,
    /// with a positive credit at the optimum. Jumps at the `m = 4` cliff leave
    /// no credit and are not counted.
    pub fn equation_gap(&self) -> bool {
        self.bisection_method == SolveMethod::Bisection && !self.equation_solvable && self.bisection_ptc > Money::ZERO
    }

    pub fn is(&self, kind: IntervalKind) -> bool {
        match kind {
            IntervalKind::IrsDiverges => self.irs_diverges(),
            IntervalKind::EquationGap => self.equation_gap(),
        }
    }
}

/// A grid point that could not be evaluated, e.g. an income below `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanFailure {
    pub income: Money,
    pub reason: String,
}

pub type ScanPoint = Result<ScanRecord, ScanFailure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    IrsDiverges,
    EquationGap,
}

impl IntervalKind {
    pub const ALL: [IntervalKind; 2] = [IntervalKind::IrsDiverges, IntervalKind::EquationGap];
}

impl fmt::Display for IntervalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalKind::IrsDiverges => "irs_diverges",
            IntervalKind::EquationGap => "equation_gap",
        })
    }
}

/// A maximal run of adjacent grid incomes sharing a classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanInterval {
    pub kind: IntervalKind,
    pub from: Money,
    pub to: Money,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub rounding: RoundingMode,
    pub max_iter: usize,
    /// Step for the brute-force oracle.
    pub oracle_step: Money,
    /// Move interval endpoints to $1 resolution by bisecting on income.
    pub refine: bool,
    /// Grid points evaluated together before being emitted.
    pub chunk: usize,
    pub quantize_figure: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            rounding: RoundingMode::Cent,
            max_iter: DEFAULT_MAX_ITER,
            oracle_step: Money::ONE_DOLLAR,
            refine: false,
            chunk: 64,
            quantize_figure: false,
        }
    }
}

/// Sweeps the income of a template household over a grid.
pub struct Scanner {
    template: Scenario,
    params: TaxYearParams,
    from: Money,
    to: Money,
    step: Money,
    config: ScanConfig,
}

impl Scanner {
    pub fn new(
        template: Scenario,
        params: TaxYearParams,
        from: Money,
        to: Money,
        step: Money,
        config: ScanConfig,
    ) -> Result<Self, ScanError> {
        if from > to {
            return Err(ScanError::Range { from, to });
        }
        if step < Money::ONE_DOLLAR {
            return Err(ScanError::Step);
        }
        Ok(Scanner { template, params, from, to, step, config })
    }

    pub fn incomes(&self) -> impl Iterator<Item = Money> + '_ {
        let (from, step) = (self.from.cents(), self.step.cents());
        let count = (self.to.cents() - from) / step + 1;
        (0..count).map(move |i| Money::from_cents(from + i * step))
    }

    fn context(&self, income: Money) -> Result<PtcContext, ContextError> {
        let mut s = self.template.clone();
        s.income = income;
        Ok(PtcContext::new(s, self.params.clone(), self.config.rounding)?
            .with_quantized_figure(self.config.quantize_figure))
    }

    /// Evaluate one income.
    pub fn evaluate(&self, income: Money) -> ScanPoint {
        let fail = |reason: String| ScanFailure { income, reason };
        let ctx = self.context(income).map_err(|e| fail(e.to_string()))?;
        let outcome = run_default_iteration(&ctx, self.config.max_iter).map_err(|e| fail(e.to_string()))?;
        let irs_status = match outcome.status {
            IterationStatus::ConvergedIrsSense => IrsStatus::Converged,
            IterationStatus::DivergedDoNotUse => IrsStatus::Diverged,
            IterationStatus::BudgetExhausted => IrsStatus::Exhausted,
        };
        let (_, simplified_ptc) = simplified_method(&ctx);
        let solution = optimal_deduction(&ctx).map_err(|e| fail(e.to_string()))?;
        let oracle_d = brute_force_max_feasible(&ctx, self.config.oracle_step);
        let q = ctx.purchased_premium();
        Ok(ScanRecord {
            income,
            irs_status,
            simplified_ptc,
            bisection_ptc: solution.ptc,
            bisection_d: solution.d,
            bisection_method: solution.method,
            certificate_holds: solution.certificate.holds(q),
            oracle_d,
            equation_solvable: (q - solution.certificate.g_at_d).abs() < Money::ONE_DOLLAR,
            benefit_gap: solution.ptc - simplified_ptc,
        })
    }

    /// Evaluate the grid, handing records to `sink` in ascending income order.
    ///
    /// Chunks of grid points run in parallel; only one chunk is buffered at a
    /// time. Returns the classified intervals.
    pub fn run<F>(&self, mut sink: F) -> io::Result<Vec<ScanInterval>>
    where
        F: FnMut(&ScanPoint) -> io::Result<()>,
    {
        let incomes: Vec<Money> = self.incomes().collect();
        let mut summary = IntervalSummary::default();
        for chunk in incomes.chunks(self.config.chunk.max(1)) {
            let points: Vec<ScanPoint> = chunk.par_iter().map(|&i| self.evaluate(i)).collect();
            for p in &points {
                summary.push(p);
                sink(p)?;
            }
        }
        let mut intervals = summary.finish();
        if self.config.refine {
            for iv in &mut intervals {
                self.refine(iv);
            }
        }
        Ok(intervals)
    }

    fn classified(&self, income: Money, kind: IntervalKind) -> bool {
        self.evaluate(income).map(|r| r.is(kind)).unwrap_or(false)
    }

    /// Narrow each endpoint to $1 between the last grid point inside and the
    /// first grid point outside.
    fn refine(&self, iv: &mut ScanInterval) {
        let one = Money::ONE_DOLLAR;
        if iv.from - self.step >= self.from {
            // inside at `iv.from`, outside one step below
            let (mut outside, mut inside) = (iv.from - self.step, iv.from);
            while inside - outside > one {
                let mid = Money::from_cents((outside.cents() + inside.cents()) / 200 * 100);
                let mid = if mid <= outside { outside + one } else { mid };
                if self.classified(mid, iv.kind) {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            iv.from = inside;
        }
        if iv.to + self.step <= self.to {
            let (mut inside, mut outside) = (iv.to, iv.to + self.step);
            while outside - inside > one {
                let mid = Money::from_cents((outside.cents() + inside.cents()) / 200 * 100);
                let mid = if mid <= inside { inside + one } else { mid };
                if self.classified(mid, iv.kind) {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            iv.to = inside;
        }
    }
}

/// Merges consecutive grid points into intervals per classification.
#[derive(Debug, Default)]
pub struct IntervalSummary {
    open: [Option<ScanInterval>; 2],
    done: Vec<ScanInterval>,
}

impl IntervalSummary {
    pub fn push(&mut self, point: &ScanPoint) {
        for (slot, kind) in self.open.iter_mut().zip(IntervalKind::ALL) {
            let hit = matches!(point, Ok(r) if r.is(kind));
            match (hit, slot.as_mut()) {
                (true, Some(iv)) => {
                    iv.to = point.as_ref().map(|r| r.income).unwrap_or(iv.to);
                    iv.points += 1;
                }
                (true, None) => {
                    let income = point.as_ref().map(|r| r.income).unwrap_or_default();
                    *slot = Some(ScanInterval { kind, from: income, to: income, points: 1 });
                }
                (false, _) => {
                    if let Some(iv) = slot.take() {
                        self.done.push(iv);
                    }
                }
            }
        }
    }

    pub fn finish(mut self) -> Vec<ScanInterval> {
        for slot in self.open.iter_mut() {
            if let Some(iv) = slot.take() {
                self.done.push(iv);
            }
        }
        self.done.sort_by_key(|iv| (iv.from, iv.kind == IntervalKind::EquationGap));
        self.done
    }
}

/// Collected output of a sweep.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub points: Vec<ScanPoint>,
    pub intervals: Vec<ScanInterval>,
}

impl ScanReport {
    pub fn records(&self) -> impl Iterator<Item = &ScanRecord> {
        self.points.iter().filter_map(|p| p.as_ref().ok())
    }

    pub fn intervals_of(&self, kind: IntervalKind) -> impl Iterator<Item = &ScanInterval> {
        self.intervals.iter().filter(move |iv| iv.kind == kind)
    }
}

/// Sweep incomes `from..=to` by `step` with `template`'s other inputs fixed.
pub fn scan_divergence(
    template: &Scenario,
    from: Money,
    to: Money,
    step: Money,
    params: &TaxYearParams,
    config: ScanConfig,
) -> Result<ScanReport, ScanError> {
    let scanner = Scanner::new(template.clone(), params.clone(), from, to, step, config)?;
    let mut points = Vec::new();
    let intervals = scanner
        .run(|p| {
            points.push(p.clone());
            Ok(())
        })
        .expect("collecting into memory cannot fail");
    Ok(ScanReport { points, intervals })
}

pub const CSV_HEADER: &str =
    "income,irs_status,simplified_ptc,bisection_ptc,bisection_d,oracle_d,equation_solvable,benefit_gap";

fn amount(m: Money, cents: bool) -> String {
    if cents {
        m.to_string()
    } else {
        m.whole_dollars().to_string()
    }
}

/// One CSV row. Deductions round down to whole dollars, other amounts to the
/// nearest dollar, unless `cents` is set.
pub fn csv_row(point: &ScanPoint, cents: bool) -> String {
    match point {
        Ok(r) => {
            let d = if cents {
                r.bisection_d.to_string()
            } else {
                (r.bisection_d.floor_dollars().cents() / 100).to_string()
            };
            format!(
                "{},{},{},{},{},{},{},{}",
                amount(r.income, cents),
                r.irs_status,
                amount(r.simplified_ptc, cents),
                amount(r.bisection_ptc, cents),
                d,
                amount(r.oracle_d, cents),
                r.equation_solvable,
                amount(r.benefit_gap, cents),
            )
        }
        Err(f) => format!("{},error,,,,,,", amount(f.income, cents)),
    }
}

pub fn write_csv<W: Write>(points: &[ScanPoint], cents: bool, mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for p in points {
        writeln!(out, "{}", csv_row(p, cents))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisection::optimal_deduction_with;
    use crate::bisection::Precision;

    fn dollars(d: i64) -> Money {
        Money::from_dollars(d)
    }

    fn brooklyn(income: i64) -> Scenario {
        Scenario::simple(dollars(16_240), dollars(10_390), dollars(10_390), dollars(income), "2018")
    }

    fn p18() -> TaxYearParams {
        TaxYearParams::bundled("2018").unwrap()
    }

    #[test]
    fn oracle_brooklyn() {
        let ctx = PtcContext::new(brooklyn(71_150), p18(), RoundingMode::Dollar).unwrap();
        assert_eq!(brute_force_max_feasible(&ctx, Money::ONE_DOLLAR), dollars(6_208));
        let ctx = PtcContext::new(brooklyn(71_150), p18(), RoundingMode::Cent).unwrap();
        assert_eq!(brute_force_max_feasible(&ctx, Money::ONE_DOLLAR), dollars(6_208));
    }

    #[test]
    fn oracle_zero_credit_takes_upper() {
        let ctx = PtcContext::new(brooklyn(80_000), p18(), RoundingMode::Cent).unwrap();
        assert_eq!(brute_force_max_feasible(&ctx, Money::ONE_DOLLAR), dollars(10_390));
    }

    #[test]
    fn oracle_includes_off_lattice_domain_end() {
        // I - F = 5,759.50 is not a whole dollar
        let mut s = brooklyn(22_000);
        s.income = Money::from_cents(2_199_950);
        s.benchmark_premium = dollars(400);
        s.purchased_premium = dollars(10_390);
        let ctx = PtcContext::new(s, p18(), RoundingMode::Cent).unwrap();
        let d = brute_force_max_feasible(&ctx, Money::ONE_DOLLAR);
        let sol = optimal_deduction_with(&ctx, Precision::Cent).unwrap();
        assert_eq!(d, sol.d);
        assert_eq!(d, Money::from_cents(575_950));
    }

    #[test]
    fn scan_classifies_brooklyn() {
        let report =
            scan_divergence(&brooklyn(0), dollars(71_100), dollars(71_200), dollars(50), &p18(), ScanConfig::default())
                .unwrap();
        let recs: Vec<_> = report.records().collect();
        assert_eq!(recs.len(), 3);
        let at = recs.iter().find(|r| r.income == dollars(71_150)).unwrap();
        assert_eq!(at.irs_status, IrsStatus::Diverged);
        assert!(at.irs_diverges());
        assert_eq!(at.simplified_ptc, Money::ZERO);
        assert!((at.bisection_d - at.oracle_d).abs() <= Money::ONE_DOLLAR);
    }

    #[test]
    fn scan_above_eligibility_converges() {
        let report = scan_divergence(
            &brooklyn(0),
            dollars(90_000),
            dollars(91_000),
            dollars(250),
            &p18(),
            ScanConfig::default(),
        )
        .unwrap();
        for r in report.records() {
            assert_eq!(r.irs_status, IrsStatus::Converged);
            assert_eq!(r.bisection_ptc, Money::ZERO);
        }
        assert!(report.intervals.is_empty());
    }

    #[test]
    fn single_point_and_bad_ranges() {
        let report =
            scan_divergence(&brooklyn(0), dollars(50_000), dollars(50_000), dollars(50), &p18(), ScanConfig::default())
                .unwrap();
        assert_eq!(report.points.len(), 1);
        assert!(
            scan_divergence(&brooklyn(0), dollars(2), dollars(1), dollars(1), &p18(), ScanConfig::default()).is_err()
        );
        assert!(scan_divergence(&brooklyn(0), dollars(1), dollars(2), Money::ONE_CENT, &p18(), ScanConfig::default())
            .is_err());
    }

    #[test]
    fn failures_are_recorded() {
        // I below Q is invalid at the low end of this grid
        let report = scan_divergence(
            &brooklyn(0),
            dollars(10_000),
            dollars(11_000),
            dollars(500),
            &p18(),
            ScanConfig::default(),
        )
        .unwrap();
        assert!(report.points[0].is_err());
        assert!(report.points[2].is_ok());
        let mut buf = Vec::new();
        write_csv(&report.points, false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.contains("10000,error,,,,,,"));
    }

    #[test]
    fn summary_merges_runs() {
        let rec = |income: i64, diverged: bool| -> ScanPoint {
            Ok(ScanRecord {
                income: dollars(income),
                irs_status: if diverged { IrsStatus::Diverged } else { IrsStatus::Converged },
                simplified_ptc: Money::ZERO,
                bisection_ptc: dollars(1),
                bisection_d: Money::ZERO,
                bisection_method: SolveMethod::Bisection,
                certificate_holds: true,
                oracle_d: Money::ZERO,
                equation_solvable: true,
                benefit_gap: dollars(1),
            })
        };
        let mut s = IntervalSummary::default();
        for (i, d) in [(1, false), (2, true), (3, true), (4, false), (5, true)] {
            s.push(&rec(i, d));
        }
        let ivs = s.finish();
        assert_eq!(ivs.len(), 2);
        assert_eq!((ivs[0].from, ivs[0].to, ivs[0].points), (dollars(2), dollars(3), 2));
        assert_eq!((ivs[1].from, ivs[1].to, ivs[1].points), (dollars(5), dollars(5), 1));
    }
}
