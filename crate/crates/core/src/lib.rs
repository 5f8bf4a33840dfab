//! Self-employed health insurance deduction and premium tax credit.
//!
//! The deduction `D` lowers household income, which raises the premium tax
//! credit `PTC(D)`, while the no-double-dipping rule caps `D + PTC(D)` at the
//! premiums paid. The best deduction is the largest `D` satisfying that cap.
//!
//! This crate computes it two ways:
//!
//! * [`iteration`] reproduces the fixed-point iteration from current IRS
//!   guidance, including the cases where it cycles and has to be abandoned;
//! * [`bisection`] searches the monotone map `d -> d + PTC(d)` directly and
//!   always returns the optimum with a certificate.
//!
//! [`analysis`] checks both against a brute-force scan and maps the incomes
//! where the iteration breaks down.
//!
//! ```
//! use circular_ptc::{optimal_deduction, Money, PtcContext, RoundingMode, Scenario};
//!
//! let household = Scenario::simple(
//!     Money::from_dollars(16_240), // poverty line
//!     Money::from_dollars(10_390), // benchmark premium
//!     Money::from_dollars(10_390), // premiums paid
//!     Money::from_dollars(71_150), // self-employment income
//!     "2018",
//! );
//! let ctx = PtcContext::with_bundled_params(household, RoundingMode::Dollar).unwrap();
//! let solution = optimal_deduction(&ctx).unwrap();
//! assert_eq!(solution.d, Money::from_dollars(6_208));
//! assert_eq!(solution.ptc, Money::from_dollars(4_182));
//! ```

pub mod analysis;
pub mod bisection;
pub mod error;
pub mod figure;
pub mod iteration;
pub mod money;
pub mod params;
pub mod ptc;
pub mod ratio;
pub mod reconcile;
pub mod report;
pub mod scenario;

pub use analysis::{brute_force_max_feasible, scan_divergence, ScanConfig, ScanRecord, Scanner};
pub use bisection::{
    optimal_deduction, optimal_deduction_with, threshold_search, Precision, Solution, SolveMethod, ThresholdProblem,
};
pub use figure::{applicable_figure, FigureTable};
pub use iteration::{
    liminf_deduction, run_default_iteration, run_iteration, simplified_method, step_g, IterationOutcome,
    IterationPoint, IterationStatus,
};
pub use money::{round_money, Money, RoundingMode};
pub use params::{load_tax_year_params, TaxYearParams};
pub use ptc::{
    expected_contribution, household_income, ptc_base, ptc_of_deduction, student_loan_deduction, PtcContext,
};
pub use ratio::{ExactRatio, Fraction};
pub use reconcile::{reconcile, repayment_limitation, NetOutcome, RepaymentLimit, RepaymentTable};
pub use scenario::{FilingStatus, Scenario, ScenarioDocument};
