//! Household inputs and the key-value scenario document format.
//!
//! ```text
//! # Brooklyn, 2018
//! F = 16240
//! P = 10390
//! Q = 10390
//! I = 71150
//! APTC = 0
//! d0 = 0
//! filing_status = single
//! tax_year = 2018
//! below_poverty_exception = false
//! # student_loan_k = 2500
//! ```
//!
//! Values may be quoted. Amounts accept cents (`865.81`). Later lines and
//! explicit overrides replace earlier values key by key.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;
use crate::money::Money;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilingStatus {
    #[default]
    Single,
    /// Any status other than single; repayment limits double.
    Other,
}

impl FromStr for FilingStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(FilingStatus::Single),
            "other" | "married_filing_jointly" | "head_of_household" | "qualifying_widow" => Ok(FilingStatus::Other),
            _ => Err(format!("unknown filing status `{s}` (expected single or other)")),
        }
    }
}

impl fmt::Display for FilingStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilingStatus::Single => "single",
            FilingStatus::Other => "other",
        })
    }
}

/// One household's return.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    /// Federal poverty line for the household (`F`).
    pub poverty_line: Money,
    /// Annual benchmark premium (`P`).
    pub benchmark_premium: Money,
    /// Annual premiums for the plans actually purchased (`Q`).
    pub purchased_premium: Money,
    /// Income relevant to household income before the insurance deduction
    /// and other adjustments (`I`).
    pub income: Money,
    /// Advance credit paid during the year.
    pub advance_credit: Money,
    /// Other above-the-line deductions that shift household income (`d0`).
    pub other_deductions: Money,
    pub filing_status: FilingStatus,
    pub tax_year: String,
    /// Household may use the 100% figure when income falls below the poverty
    /// line.
    pub below_poverty_exception: bool,
    /// Student loan interest eligible for the phased-out deduction, if any.
    pub student_loan_k: Option<Money>,
}

impl Scenario {
    /// A single filer with no advance credit, extra deductions or student
    /// loans.
    pub fn simple(
        poverty_line: Money,
        benchmark_premium: Money,
        purchased_premium: Money,
        income: Money,
        tax_year: &str,
    ) -> Self {
        Scenario {
            poverty_line,
            benchmark_premium,
            purchased_premium,
            income,
            advance_credit: Money::ZERO,
            other_deductions: Money::ZERO,
            filing_status: FilingStatus::Single,
            tax_year: tax_year.to_string(),
            below_poverty_exception: false,
            student_loan_k: None,
        }
    }

    /// Premiums still billed after the advance credit, the upper limit on the
    /// deduction.
    pub fn billed_premium(&self) -> Money {
        self.purchased_premium - self.advance_credit
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let positive = |key, v: Money| {
            if v.cents() <= 0 {
                Err(ScenarioError::Constraint { key, value: v, rule: "must be positive" })
            } else {
                Ok(())
            }
        };
        positive("F", self.poverty_line)?;
        positive("P", self.benchmark_premium)?;
        positive("Q", self.purchased_premium)?;
        if self.income < self.purchased_premium {
            return Err(ScenarioError::Constraint { key: "I", value: self.income, rule: "I >= Q" });
        }
        if self.advance_credit.is_negative() || self.advance_credit > self.purchased_premium {
            return Err(ScenarioError::Constraint { key: "APTC", value: self.advance_credit, rule: "0 <= APTC <= Q" });
        }
        if self.other_deductions.is_negative() {
            return Err(ScenarioError::Constraint { key: "d0", value: self.other_deductions, rule: "d0 >= 0" });
        }
        let k = self.student_loan_k.unwrap_or(Money::ZERO);
        if k.is_negative() {
            return Err(ScenarioError::Constraint { key: "student_loan_k", value: k, rule: "student_loan_k >= 0" });
        }
        if self.other_deductions + k > self.income - self.purchased_premium {
            return Err(ScenarioError::Constraint {
                key: "d0",
                value: self.other_deductions,
                rule: "d0 + student_loan_k <= I - Q (household income must stay non-negative)",
            });
        }
        Ok(())
    }

    pub fn to_document(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.entries() {
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![
            ("F", self.poverty_line.to_string()),
            ("P", self.benchmark_premium.to_string()),
            ("Q", self.purchased_premium.to_string()),
            ("I", self.income.to_string()),
            ("APTC", self.advance_credit.to_string()),
            ("d0", self.other_deductions.to_string()),
            ("filing_status", self.filing_status.to_string()),
            ("tax_year", self.tax_year.clone()),
            ("below_poverty_exception", self.below_poverty_exception.to_string()),
        ];
        if let Some(k) = self.student_loan_k {
            v.push(("student_loan_k", k.to_string()));
        }
        v
    }
}

const KEYS: [&str; 10] =
    ["F", "P", "Q", "I", "APTC", "d0", "filing_status", "tax_year", "below_poverty_exception", "student_loan_k"];

/// Raw key-value pairs with the line each came from. Line 0 marks an
/// override supplied outside the document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScenarioDocument {
    entries: Vec<(String, String, usize)>,
}

impl ScenarioDocument {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let mut doc = ScenarioDocument::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = strip_comment(raw).trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ScenarioError::Syntax {
                line,
                reason: format!("expected `key = value`, found `{content}`"),
            })?;
            doc.insert(key.trim(), unquote(value.trim()), line)?;
        }
        Ok(doc)
    }

    /// Replace or add one key, e.g. from a command-line `--set I=50000`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ScenarioError> {
        self.insert(key.trim(), unquote(value.trim()), 0)
    }

    fn insert(&mut self, key: &str, value: &str, line: usize) -> Result<(), ScenarioError> {
        if !KEYS.contains(&key) {
            return Err(ScenarioError::UnknownKey { key: key.to_string(), line });
        }
        self.entries.retain(|(k, _, _)| k != key);
        self.entries.push((key.to_string(), value.to_string(), line));
        Ok(())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.iter().find(|(k, _, _)| k == key).map(|(_, v, l)| (v.as_str(), *l))
    }

    fn parse_value<T: FromStr>(&self, key: &str) -> Result<Option<T>, ScenarioError>
    where
        T::Err: fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse().map(Some).map_err(|e: T::Err| ScenarioError::Value {
                key: key.to_string(),
                line,
                reason: e.to_string(),
            }),
        }
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T, ScenarioError>
    where
        T::Err: fmt::Display,
    {
        self.parse_value(key)?.ok_or_else(|| ScenarioError::Missing(key.to_string()))
    }

    /// Build and validate the scenario.
    pub fn to_scenario(&self) -> Result<Scenario, ScenarioError> {
        let bool_value = |key: &str| -> Result<bool, ScenarioError> {
            match self.get(key) {
                None => Ok(false),
                Some((v, line)) => match v.to_ascii_lowercase().as_str() {
                    "true" | "yes" | "1" => Ok(true),
                    "false" | "no" | "0" => Ok(false),
                    _ => Err(ScenarioError::Value {
                        key: key.to_string(),
                        line,
                        reason: format!("`{v}` is not a boolean"),
                    }),
                },
            }
        };
        let scenario = Scenario {
            poverty_line: self.require("F")?,
            benchmark_premium: self.require("P")?,
            purchased_premium: self.require("Q")?,
            income: self.require("I")?,
            advance_credit: self.parse_value("APTC")?.unwrap_or(Money::ZERO),
            other_deductions: self.parse_value("d0")?.unwrap_or(Money::ZERO),
            filing_status: self.parse_value("filing_status")?.unwrap_or_default(),
            tax_year: self.require("tax_year")?,
            below_poverty_exception: bool_value("below_poverty_exception")?,
            student_loan_k: self.parse_value("student_loan_k")?,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}
