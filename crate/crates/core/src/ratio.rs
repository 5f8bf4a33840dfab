//! Exact rational numbers over `i128`.
//!
//! Values never get reduced on construction; equality and ordering go through
//! cross-multiplication. Every quantity in this crate is bounded (cents of
//! household income, ten-thousandths of a figure) so products stay far below
//! `i128::MAX`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::money::Money;

/// Exact fraction `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
pub struct Fraction {
    num: i128,
    den: i128,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    /// Panics if `den == 0`. A negative denominator is normalised.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "fraction with zero denominator");
        if den < 0 {
            Fraction { num: -num, den: -den }
        } else {
            Fraction { num, den }
        }
    }

    pub const fn from_int(n: i128) -> Self {
        Fraction { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    /// Lowest terms.
    pub fn reduced(self) -> Fraction {
        let g = gcd(self.num.unsigned_abs(), self.den.unsigned_abs()) as i128;
        if g <= 1 {
            self
        } else {
            Fraction { num: self.num / g, den: self.den / g }
        }
    }

    /// Round half away from zero to an integer multiple of `1 / scale`,
    /// returning the multiple count.
    pub fn round_to_scale(self, scale: i128) -> i128 {
        div_round_half_away(self.num * scale, self.den)
    }

    /// Exact decimal rendering with `places` digits, rounded half away from zero.
    pub fn to_decimal_string(self, places: u32) -> String {
        let scale = 10i128.pow(places);
        let units = self.round_to_scale(scale);
        let sign = if units < 0 { "-" } else { "" };
        let abs = units.unsigned_abs();
        if places == 0 {
            return format!("{sign}{abs}");
        }
        let scale = scale as u128;
        format!("{sign}{}.{:0width$}", abs / scale, abs % scale, width = places as usize)
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Mul for Fraction {
    type Output = Fraction;

    fn mul(self, other: Fraction) -> Fraction {
        Fraction::new(self.num * other.num, self.den * other.den)
    }
}

impl Add for Fraction {
    type Output = Fraction;

    fn add(self, other: Fraction) -> Fraction {
        if self.den == other.den {
            return Fraction::new(self.num + other.num, self.den);
        }
        Fraction::new(self.num * other.den + other.num * self.den, self.den * other.den)
    }
}

impl Neg for Fraction {
    type Output = Fraction;

    fn neg(self) -> Fraction {
        Fraction { num: -self.num, den: self.den }
    }
}

impl Sub for Fraction {
    type Output = Fraction;

    fn sub(self, other: Fraction) -> Fraction {
        self + -other
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.num * other.den == other.num * self.den
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.den == 1 {
            write!(f, "{}", r.num)
        } else {
            write!(f, "{}/{}", r.num, r.den)
        }
    }
}

/// Income-to-poverty-line ratio `m = M / F`, both sides held in cents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactRatio(Fraction);

impl ExactRatio {
    /// `denominator` must be positive.
    pub fn new(numerator: Money, denominator: Money) -> Self {
        assert!(denominator.cents() > 0, "ratio denominator must be positive");
        ExactRatio(Fraction::new(numerator.cents() as i128, denominator.cents() as i128))
    }

    /// `hundredths / 100`; breakpoints such as 1.33 are written `133`.
    pub fn from_hundredths(hundredths: i64) -> Self {
        ExactRatio(Fraction::new(hundredths as i128, 100))
    }

    pub fn from_fraction(f: Fraction) -> Self {
        ExactRatio(f)
    }

    pub fn as_fraction(&self) -> Fraction {
        self.0
    }

    pub fn numerator(&self) -> i128 {
        self.0.numer()
    }

    pub fn denominator(&self) -> i128 {
        self.0.denom()
    }

    /// Compare against `hundredths / 100` without building a fraction.
    pub fn cmp_hundredths(&self, hundredths: i64) -> Ordering {
        (self.0.numer() * 100).cmp(&(hundredths as i128 * self.0.denom()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_decimal_string(4))
    }
}

/// `num / den` rounded half away from zero. `den > 0`.
pub(crate) fn div_round_half_away(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    let q = (2 * num.abs() + den) / (2 * den);
    if num < 0 {
        -q
    } else {
        q
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_is_by_value() {
        assert_eq!(Fraction::new(1, 2), Fraction::new(50, 100));
        assert_eq!(Fraction::new(-1, -2), Fraction::new(1, 2));
        assert!(Fraction::new(133, 100) > Fraction::new(132, 100));
    }

    #[test]
    fn half_away_rounding() {
        assert_eq!(div_round_half_away(5, 2), 3);
        assert_eq!(div_round_half_away(-5, 2), -3);
        assert_eq!(div_round_half_away(4, 3), 1);
        assert_eq!(div_round_half_away(-4, 3), -1);
        assert_eq!(div_round_half_away(0, 7), 0);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Fraction::new(722, 10_000).to_decimal_string(4), "0.0722");
        assert_eq!(Fraction::new(-1, 3).to_decimal_string(2), "-0.33");
        assert_eq!(Fraction::new(7, 2).to_decimal_string(0), "4");
    }

    #[test]
    fn breakpoint_comparison_is_exact() {
        // 21_599.20 / 16_240 is exactly 1.33
        let m = ExactRatio::new(Money::from_cents(2_159_920), Money::from_dollars(16_240));
        assert_eq!(m.cmp_hundredths(133), Ordering::Equal);
        let below = ExactRatio::new(Money::from_cents(2_159_919), Money::from_dollars(16_240));
        assert_eq!(below.cmp_hundredths(133), Ordering::Less);
    }
}
