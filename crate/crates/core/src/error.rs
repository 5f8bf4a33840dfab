use thiserror::Error;

use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid money amount `{0}`")]
pub struct ParseMoneyError(pub String);

/// Problems with a tax-year parameter document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("malformed parameter document: {0}")]
    Syntax(String),
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("unsupported schema_version {0} (this build reads version 1)")]
    Schema(i64),
    #[error("figure values must be nondecreasing: `{lower}` exceeds `{upper}`")]
    NotMonotone { lower: String, upper: String },
    #[error("repayment limits must satisfy 0 < r <= s <= t (key `{0}`)")]
    RepaymentOrder(String),
}

/// Problems with a scenario document or scenario values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: key `{key}`: {reason}")]
    Value { key: String, line: usize, reason: String },
    #[error("unknown key `{key}` (line {line})")]
    UnknownKey { key: String, line: usize },
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("`{key}` = {value}: {rule}")]
    Constraint { key: &'static str, value: Money, rule: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FigureError {
    #[error("ratio {0} lies outside [0, 4]; no applicable figure is defined there")]
    OutOfDomain(String),
}

/// Failures of the threshold search and the solvers built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search bounds are inverted: lo {lo} > hi {hi}")]
    InvertedBounds { lo: Money, hi: Money },
    #[error("g(lo) = {value} exceeds the threshold {threshold}")]
    StartAboveThreshold { value: Money, threshold: Money },
    #[error("tolerance must be at least one cent")]
    Tolerance,
    #[error("g is not monotone: g({a}) = {ga} but g({b}) = {gb}")]
    NotMonotone { a: Money, ga: Money, b: Money, gb: Money },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IterationError {
    #[error("iteration budget exhausted after {0} steps without convergence or a repeated state")]
    BudgetExhausted(usize),
    #[error("max_iter must be at least 2")]
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("income range is empty: from {from} > to {to}")]
    Range { from: Money, to: Money },
    #[error("scan step must be at least $1")]
    Step,
}

/// Failures while assembling a computation context.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("no parameters for tax year `{0}`")]
    UnknownTaxYear(String),
    #[error("parameters are for tax year `{params}` but the scenario is for `{scenario}`")]
    YearMismatch { scenario: String, params: String },
}
