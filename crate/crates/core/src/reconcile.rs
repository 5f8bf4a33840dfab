//! Reconciling advance credit payments against the final credit.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bisection::Solution;
use crate::money::Money;
use crate::ptc::{household_income, PtcContext};
use crate::ratio::ExactRatio;
use crate::scenario::FilingStatus;

/// Caps on repaying excess advance credit, banded by `m`:
/// `r` below 200%, `s` below 300%, `t` below 400%, unlimited from 400%.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RepaymentTable {
    single: [Money; 3],
    other: Option<[Money; 3]>,
}

impl RepaymentTable {
    /// `other` overrides the default of doubling the single-filer limits.
    /// On failure returns the offending key.
    pub fn new(single: [Money; 3], other: Option<[Money; 3]>) -> Result<Self, String> {
        check_triple(&single, "repay.single")?;
        if let Some(o) = &other {
            check_triple(o, "repay.other")?;
        }
        Ok(RepaymentTable { single, other })
    }

    pub fn single(&self) -> [Money; 3] {
        self.single
    }

    pub fn other_override(&self) -> Option<[Money; 3]> {
        self.other
    }

    pub fn limits(&self, status: FilingStatus) -> [Money; 3] {
        match status {
            FilingStatus::Single => self.single,
            FilingStatus::Other => self.other.unwrap_or(self.single.map(|v| v + v)),
        }
    }
}

fn check_triple(v: &[Money; 3], prefix: &str) -> Result<(), String> {
    if v[0] <= Money::ZERO {
        return Err(format!("{prefix}.r"));
    }
    if v[0] > v[1] {
        return Err(format!("{prefix}.s"));
    }
    if v[1] > v[2] {
        return Err(format!("{prefix}.t"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "amount")]
pub enum RepaymentLimit {
    Limited(Money),
    Unlimited,
}

impl RepaymentLimit {
    /// `min(excess, limit)`.
    pub fn cap(self, excess: Money) -> Money {
        match self {
            RepaymentLimit::Limited(limit) => excess.min(limit),
            RepaymentLimit::Unlimited => excess,
        }
    }
}

impl fmt::Display for RepaymentLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepaymentLimit::Limited(m) => write!(f, "{}", m.pretty()),
            RepaymentLimit::Unlimited => f.write_str("unlimited"),
        }
    }
}

pub fn repayment_limitation(m: ExactRatio, status: FilingStatus, table: &RepaymentTable) -> RepaymentLimit {
    let [r, s, t] = table.limits(status);
    if m.cmp_hundredths(200) == Ordering::Less {
        RepaymentLimit::Limited(r)
    } else if m.cmp_hundredths(300) == Ordering::Less {
        RepaymentLimit::Limited(s)
    } else if m.cmp_hundredths(400) == Ordering::Less {
        RepaymentLimit::Limited(t)
    } else {
        RepaymentLimit::Unlimited
    }
}

/// What happens at filing time once the final credit is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetOutcome {
    pub ptc: Money,
    pub advance_credit: Money,
    /// Credit still owed to the household (`PTC - APTC` when positive).
    pub additional_credit: Money,
    /// Excess advance credit the household pays back.
    pub repayment: Money,
    pub repayment_limit: RepaymentLimit,
    /// `APTC - repayment`; defined only when the advance exceeded the credit.
    pub total_benefit: Option<Money>,
}

/// Settle the advance payments for `ptc` at household ratio `m`.
pub fn net_outcome(
    advance_credit: Money,
    ptc: Money,
    m: ExactRatio,
    status: FilingStatus,
    table: &RepaymentTable,
) -> NetOutcome {
    let limit = repayment_limitation(m, status, table);
    if ptc >= advance_credit {
        NetOutcome {
            ptc,
            advance_credit,
            additional_credit: ptc - advance_credit,
            repayment: Money::ZERO,
            repayment_limit: limit,
            total_benefit: None,
        }
    } else {
        let repayment = limit.cap(advance_credit - ptc);
        NetOutcome {
            ptc,
            advance_credit,
            additional_credit: Money::ZERO,
            repayment,
            repayment_limit: limit,
            total_benefit: Some(advance_credit - repayment),
        }
    }
}

pub fn reconcile(ctx: &PtcContext, solution: &Solution) -> NetOutcome {
    let m = ctx.ratio(household_income(ctx, solution.d).max(Money::ZERO));
    net_outcome(ctx.scenario.advance_credit, solution.ptc, m, ctx.scenario.filing_status, &ctx.params.repayment_table)
}
