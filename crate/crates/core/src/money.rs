//! Integer-cent currency and the rounding rules applied to intermediate
//! amounts.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseMoneyError;
use crate::ratio::{div_round_half_away, Fraction};

/// A signed amount of US cents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);
    pub const ONE_CENT: Money = Money(1);
    pub const ONE_DOLLAR: Money = Money(100);

    pub const fn from_cents(cents: i64) -> Self {
        Money(cents)
    }

    pub const fn from_dollars(dollars: i64) -> Self {
        Money(dollars * 100)
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn abs(self) -> Money {
        Money(self.0.abs())
    }

    /// The amount as an exact fraction of dollars.
    pub fn to_dollars_fraction(self) -> Fraction {
        Fraction::new(self.0 as i128, 100)
    }

    /// Largest whole-dollar amount not above `self`.
    pub fn floor_dollars(self) -> Money {
        Money(self.0.div_euclid(100) * 100)
    }

    /// Nearest whole dollar, ties away from zero.
    pub fn round_dollars(self) -> Money {
        Money(div_round_half_away(self.0 as i128, 100) as i64 * 100)
    }

    /// Whole-dollar count after rounding half away from zero.
    pub fn whole_dollars(self) -> i64 {
        div_round_half_away(self.0 as i128, 100) as i64
    }

    /// `$12,345.67`, or `$12,345` when the cents are zero.
    pub fn pretty(self) -> String {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let dollars = group_thousands(abs / 100);
        match abs % 100 {
            0 => format!("{sign}${dollars}"),
            c => format!("{sign}${dollars}.{c:02}"),
        }
    }
}

fn group_thousands(mut n: u64) -> String {
    let mut groups = Vec::new();
    loop {
        if n < 1000 {
            groups.push(n.to_string());
            break;
        }
        groups.push(format!("{:03}", n % 1000));
        n /= 1000;
    }
    groups.reverse();
    groups.join(",")
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl SubAssign for Money {
    fn sub_assign(&mut self, rhs: Money) {
        self.0 -= rhs.0;
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

/// Plain decimal, always two places: `6208.43`, `-5.00`.
impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

/// Accepts `1234`, `1234.5`, `1234.56`, an optional leading `$` or `-`, and
/// `,` thousands separators. More than two decimals is an error.
impl FromStr for Money {
    type Err = ParseMoneyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseMoneyError(s.to_string());
        let t = s.trim();
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let t = t.strip_prefix('$').unwrap_or(t).replace(',', "");
        let (whole, frac) = match t.split_once('.') {
            Some((w, f)) => (w, f),
            None => (t.as_str(), ""),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(err());
        }
        if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        if frac.len() > 2 {
            return Err(err());
        }
        let dollars: i64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| err())? };
        let cents: i64 = match frac.len() {
            0 => 0,
            1 => frac.parse::<i64>().map_err(|_| err())? * 10,
            _ => frac.parse().map_err(|_| err())?,
        };
        let total = dollars.checked_mul(100).and_then(|d| d.checked_add(cents)).ok_or_else(err)?;
        Ok(Money(if neg { -total } else { total }))
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Granularity applied after each intermediate calculation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundingMode {
    /// Nearest cent after every step.
    #[default]
    Cent,
    /// Nearest whole dollar after every step.
    Dollar,
    /// Carry exact values and round to the cent only once, at the end of a
    /// credit computation.
    None,
}

impl FromStr for RoundingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cent" => Ok(RoundingMode::Cent),
            "dollar" => Ok(RoundingMode::Dollar),
            "none" => Ok(RoundingMode::None),
            other => Err(format!("unknown rounding mode `{other}` (expected cent, dollar or none)")),
        }
    }
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoundingMode::Cent => "cent",
            RoundingMode::Dollar => "dollar",
            RoundingMode::None => "none",
        })
    }
}

/// Round an exact dollar amount to a `Money`, half away from zero.
///
/// `None` still lands on the cent lattice since `Money` cannot hold anything
/// finer.
pub fn round_money(dollars: Fraction, mode: RoundingMode) -> Money {
    round_cents_fraction(dollars * Fraction::from_int(100), mode)
}

/// Same as [`round_money`] but for a value already expressed in cents.
pub(crate) fn round_cents_fraction(cents: Fraction, mode: RoundingMode) -> Money {
    round_cents(cents.numer(), cents.denom(), mode)
}

/// Round `num / den` cents.
pub(crate) fn round_cents(num: i128, den: i128, mode: RoundingMode) -> Money {
    match mode {
        RoundingMode::Cent | RoundingMode::None => Money(div_round_half_away(num, den) as i64),
        RoundingMode::Dollar => Money(div_round_half_away(num, den * 100) as i64 * 100),
    }
}
