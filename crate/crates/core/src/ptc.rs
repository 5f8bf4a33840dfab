//! Premium tax credit as a function of the insurance deduction.

use crate::error::ContextError;
use crate::figure::{quantize_figure, FigureTable};
use crate::money::{round_cents, Money, RoundingMode};
use crate::params::TaxYearParams;
use crate::ratio::{ExactRatio, Fraction};
use crate::scenario::Scenario;

const SL_PHASE_OUT_START: Money = Money::from_dollars(70_000);
const SL_PHASE_OUT_END: Money = Money::from_dollars(85_000);

/// A validated scenario paired with its tax-year parameters and the rounding
/// cadence used for every intermediate amount.
#[derive(Clone, Debug)]
pub struct PtcContext {
    pub scenario: Scenario,
    pub params: TaxYearParams,
    pub rounding: RoundingMode,
    /// Round each applicable figure to a ten-thousandth, as the printed tables
    /// do. Off by default.
    pub quantize_figure: bool,
}

impl PtcContext {
    pub fn new(scenario: Scenario, params: TaxYearParams, rounding: RoundingMode) -> Result<Self, ContextError> {
        scenario.validate()?;
        if scenario.tax_year != params.year {
            return Err(ContextError::YearMismatch { scenario: scenario.tax_year, params: params.year });
        }
        Ok(PtcContext { scenario, params, rounding, quantize_figure: false })
    }

    /// Use the parameters bundled for the scenario's tax year.
    pub fn with_bundled_params(scenario: Scenario, rounding: RoundingMode) -> Result<Self, ContextError> {
        let params = TaxYearParams::bundled(&scenario.tax_year)
            .ok_or_else(|| ContextError::UnknownTaxYear(scenario.tax_year.clone()))?;
        Self::new(scenario, params, rounding)
    }

    pub fn with_quantized_figure(mut self, quantize: bool) -> Self {
        self.quantize_figure = quantize;
        self
    }

    pub fn figure_table(&self) -> &FigureTable {
        &self.params.figure_table
    }

    pub fn poverty_line(&self) -> Money {
        self.scenario.poverty_line
    }

    pub fn purchased_premium(&self) -> Money {
        self.scenario.purchased_premium
    }

    pub fn billed_premium(&self) -> Money {
        self.scenario.billed_premium()
    }

    /// `m = M / F`.
    pub fn ratio(&self, household_income: Money) -> ExactRatio {
        ExactRatio::new(household_income, self.scenario.poverty_line)
    }

    /// Whether the credit is available at this household income: `F <= M <= 4F`,
    /// or `0 <= M <= 4F` when the below-poverty exception applies.
    pub fn eligible_income(&self, household_income: Money) -> bool {
        let f = self.scenario.poverty_line.cents() as i128;
        let m = household_income.cents() as i128;
        if m > 4 * f {
            return false;
        }
        m >= f || self.scenario.below_poverty_exception
    }

    /// `g(d) = d + PTC(d)`, the left side of the no-double-dipping constraint.
    pub fn g(&self, d: Money) -> Money {
        d + ptc_of_deduction(self, d)
    }

    /// Largest deduction in `[0, Q - APTC]` that keeps the household eligible
    /// for the credit. `None` when even a zero deduction leaves household
    /// income below the poverty line and no exception applies.
    pub fn eligibility_limit(&self) -> Option<Money> {
        let billed = self.billed_premium();
        if self.scenario.below_poverty_exception {
            return Some(billed);
        }
        let f = self.scenario.poverty_line;
        if household_income(self, Money::ZERO) < f {
            return None;
        }
        if self.scenario.student_loan_k.is_none() {
            let s = &self.scenario;
            return Some(billed.min(s.income - s.other_deductions - f));
        }
        // household income is nonincreasing in d, so binary search the cents
        let (mut lo, mut hi) = (0i64, billed.cents());
        if household_income(self, billed) >= f {
            return Some(billed);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if household_income(self, Money::from_cents(mid)) >= f {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(Money::from_cents(lo))
    }
}

/// Household income `M = I - d0 - d`, less the student-loan deduction when
/// one is chained in.
///
/// The student-loan deduction is computed once from a MAGI that already
/// reflects `d` but has the student-loan deduction itself at zero.
pub fn household_income(ctx: &PtcContext, d: Money) -> Money {
    let s = &ctx.scenario;
    let before_sl = s.income - s.other_deductions - d;
    match s.student_loan_k {
        Some(k) => before_sl - student_loan_deduction(k, before_sl),
        None => before_sl,
    }
}

/// `figure * M`, rounded per `rounding`.
pub fn expected_contribution(household_income: Money, figure: Fraction, rounding: RoundingMode) -> Money {
    let product = figure * Fraction::from_int(household_income.cents() as i128);
    round_cents(product.numer(), product.denom(), rounding)
}

fn figure_for(ctx: &PtcContext, household_income: Money) -> Fraction {
    let f = ctx
        .figure_table()
        .evaluate_raw(household_income.cents().max(0) as i128, ctx.scenario.poverty_line.cents() as i128);
    if ctx.quantize_figure {
        quantize_figure(f)
    } else {
        f
    }
}

/// `min(Q, max(0, P - f(m) * M))`.
///
/// `M` must lie in `[0, 4F]`; below `F` the figure is `f(1)`.
pub fn ptc_base(ctx: &PtcContext, household_income: Money) -> Money {
    let s = &ctx.scenario;
    let figure = figure_for(ctx, household_income);
    let raw = match ctx.rounding {
        RoundingMode::None => {
            let exact = Fraction::from_int(s.benchmark_premium.cents() as i128)
                - figure * Fraction::from_int(household_income.cents() as i128);
            round_cents(exact.numer(), exact.denom(), RoundingMode::Cent)
        }
        mode => {
            let contribution = expected_contribution(household_income, figure, mode);
            let diff = s.benchmark_premium - contribution;
            round_cents(diff.cents() as i128, 1, mode)
        }
    };
    raw.max(Money::ZERO).min(s.purchased_premium)
}

/// The credit as a function of the deduction: zero above 400% of the poverty
/// line, zero below 100% unless the exception applies.
pub fn ptc_of_deduction(ctx: &PtcContext, d: Money) -> Money {
    let m = household_income(ctx, d);
    if ctx.eligible_income(m) {
        ptc_base(ctx, m)
    } else {
        Money::ZERO
    }
}

/// Student loan interest deduction after the MAGI phase-out:
/// `k` up to $70,000, zero from $85,000, linear in between.
pub fn student_loan_deduction(k: Money, magi: Money) -> Money {
    if magi <= SL_PHASE_OUT_START {
        return k;
    }
    if magi >= SL_PHASE_OUT_END {
        return Money::ZERO;
    }
    let remaining = (SL_PHASE_OUT_END - magi).cents() as i128;
    let width = (SL_PHASE_OUT_END - SL_PHASE_OUT_START).cents() as i128;
    round_cents(k.cents() as i128 * remaining, width, RoundingMode::Cent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figure::FigureTable;

    fn dollars(d: i64) -> Money {
        Money::from_dollars(d)
    }

    fn brooklyn(rounding: RoundingMode) -> PtcContext {
        let s = Scenario::simple(dollars(16_240), dollars(10_390), dollars(10_390), dollars(71_150), "2018");
        PtcContext::with_bundled_params(s, rounding).unwrap()
    }

    #[test]
    fn household_income_examples() {
        let ctx = brooklyn(RoundingMode::Dollar);
        assert_eq!(household_income(&ctx, dollars(10_390)), dollars(60_760));
        let mut s = ctx.scenario.clone();
        s.other_deductions = dollars(1_000);
        let ctx = PtcContext::with_bundled_params(s, RoundingMode::Cent).unwrap();
        assert_eq!(household_income(&ctx, dollars(5_000)), dollars(65_150));
        let s = Scenario::simple(dollars(12_000), dollars(6_000), dollars(6_000), dollars(48_000), "2018");
        let ctx = PtcContext::with_bundled_params(s, RoundingMode::Cent).unwrap();
        assert_eq!(household_income(&ctx, Money::ZERO), dollars(48_000));
    }

    #[test]
    fn expected_contribution_examples() {
        let nine = Fraction::new(9, 100);
        assert_eq!(expected_contribution(dollars(48_000), nine, RoundingMode::Dollar), dollars(4_320));
        // 0.0956 * 60,760 = 5,808.656
        let c = Fraction::new(956, 10_000);
        assert_eq!(expected_contribution(dollars(60_760), c, RoundingMode::Dollar), dollars(5_809));
        assert_eq!(expected_contribution(dollars(60_760), c, RoundingMode::Cent), Money::from_cents(580_866));
        assert_eq!(expected_contribution(Money::ZERO, c, RoundingMode::Dollar), Money::ZERO);
    }

    #[test]
    fn dutchess_simplified_example() {
        let s = Scenario::simple(dollars(12_000), dollars(6_000), dollars(6_000), dollars(48_000), "flat");
        let params = TaxYearParams {
            year: "flat".into(),
            figure_table: FigureTable::constant(900).unwrap(),
            repayment_table: TaxYearParams::bundled("2018").unwrap().repayment_table,
        };
        for mode in [RoundingMode::Dollar, RoundingMode::Cent, RoundingMode::None] {
            let ctx = PtcContext::new(s.clone(), params.clone(), mode).unwrap();
            assert_eq!(ptc_base(&ctx, dollars(48_000)), dollars(1_680));
        }
    }

    #[test]
    fn brooklyn_credit_values() {
        let ctx = brooklyn(RoundingMode::Dollar);
        assert_eq!(ptc_base(&ctx, dollars(60_760)), dollars(4_581));
        assert_eq!(ptc_of_deduction(&ctx, dollars(10_390)), dollars(4_581));
        // 71,150 - 5,809 = 65,341 > 4F = 64,960
        assert_eq!(ptc_of_deduction(&ctx, dollars(5_809)), Money::ZERO);
        assert_eq!(ptc_of_deduction(&ctx, dollars(6_208)), dollars(4_182));
    }

    #[test]
    fn clamps() {
        let ctx = brooklyn(RoundingMode::Cent);
        // contribution above the benchmark premium: f(3.9) * 63,336 > P when P is tiny
        let mut s = ctx.scenario.clone();
        s.benchmark_premium = dollars(500);
        let small = PtcContext::with_bundled_params(s, RoundingMode::Cent).unwrap();
        assert_eq!(ptc_base(&small, dollars(63_336)), Money::ZERO);
        // Q caps the credit
        let mut s = ctx.scenario.clone();
        s.purchased_premium = dollars(2_000);
        let capped = PtcContext::with_bundled_params(s, RoundingMode::Cent).unwrap();
        assert_eq!(ptc_base(&capped, dollars(60_760)), dollars(2_000));
    }

    #[test]
    fn four_f_boundary_is_eligible() {
        let ctx = brooklyn(RoundingMode::Cent);
        let at_edge = dollars(71_150 - 64_960);
        assert!(ptc_of_deduction(&ctx, at_edge) > Money::ZERO);
        assert_eq!(ptc_of_deduction(&ctx, at_edge - Money::ONE_CENT), Money::ZERO);
    }

    #[test]
    fn below_poverty_line() {
        let s = Scenario::simple(dollars(16_240), dollars(10_390), dollars(10_390), dollars(20_000), "2018");
        let ctx = PtcContext::with_bundled_params(s.clone(), RoundingMode::Cent).unwrap();
        // M = 20,000 - 5,000 < F
        assert_eq!(ptc_of_deduction(&ctx, dollars(5_000)), Money::ZERO);
        let mut s = s;
        s.below_poverty_exception = true;
        let ctx = PtcContext::with_bundled_params(s, RoundingMode::Cent).unwrap();
        // 10,390 - 0.0201 * 15,000 = 10,088.50
        assert_eq!(ptc_of_deduction(&ctx, dollars(5_000)), Money::from_cents(1_008_850));
    }

    #[test]
    fn student_loan_phase_out() {
        let k = dollars(2_500);
        assert_eq!(student_loan_deduction(k, dollars(85_000)), Money::ZERO);
        assert_eq!(student_loan_deduction(k, dollars(70_000)), k);
        assert_eq!(student_loan_deduction(k, dollars(77_500)), dollars(1_250));
        assert_eq!(student_loan_deduction(k, dollars(90_000)), Money::ZERO);
        assert_eq!(student_loan_deduction(k, dollars(10_000)), k);
        let mut prev = k;
        for magi in (69_000..86_000).step_by(37) {
            let cur = student_loan_deduction(k, dollars(magi));
            assert!(cur <= prev);
            prev = cur;
        }
    }

    #[test]
    fn rejects_year_mismatch() {
        let ctx = brooklyn(RoundingMode::Cent);
        let p19 = TaxYearParams::bundled("2019").unwrap();
        assert!(matches!(
            PtcContext::new(ctx.scenario.clone(), p19, RoundingMode::Cent),
            Err(ContextError::YearMismatch { .. })
        ));
        let mut s = ctx.scenario;
        s.tax_year = "1999".into();
        assert_eq!(
            PtcContext::with_bundled_params(s, RoundingMode::Cent).unwrap_err(),
            ContextError::UnknownTaxYear("1999".into())
        );
    }
}
