//! The applicable figure: the share of household income a household is
//! expected to put toward its benchmark premium, as a function of
//! `m = household income / poverty line`.
//!
//! Between knots at 1.33, 1.5, 2, 2.5 and 3 the figure interpolates linearly;
//! it is flat below 1.33 and at or above 3. Every segment is closed on the
//! left and open on the right, so the function is right continuous and jumps
//! upward at 1.33.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::FigureError;
use crate::ratio::{ExactRatio, Fraction};

/// Knot positions in hundredths of the poverty line.
pub const KNOTS: [i64; 6] = [100, 133, 150, 200, 250, 300];
/// Upper end of the domain (400% of the poverty line).
pub const DOMAIN_END: i64 = 400;

/// Fixed-point scale of figure values: one unit is a ten-thousandth.
pub const FIGURE_SCALE: i128 = 10_000;

/// Applicable-figure values at each knot, in ten-thousandths.
///
/// `values[0]` applies on `[0, 1.33)`, `values[5]` on `[3, 4]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FigureTable {
    values: [i64; 6],
}

impl FigureTable {
    /// Values must satisfy `0 < v0 <= v1 <= ... <= v5 < 1000`.
    pub fn new(values: [i64; 6]) -> Result<Self, (usize, usize)> {
        if values[0] <= 0 {
            return Err((0, 0));
        }
        for i in 1..6 {
            if values[i - 1] > values[i] {
                return Err((i - 1, i));
            }
        }
        if values[5] >= 1000 {
            return Err((5, 5));
        }
        Ok(FigureTable { values })
    }

    /// The same figure everywhere.
    pub fn constant(ten_thousandths: i64) -> Result<Self, (usize, usize)> {
        Self::new([ten_thousandths; 6])
    }

    pub fn values(&self) -> [i64; 6] {
        self.values
    }

    pub fn knot_value(&self, knot: usize) -> Fraction {
        Fraction::new(self.values[knot] as i128, FIGURE_SCALE)
    }

    /// The figure at the lower end of the jump, `f(1)`.
    pub fn floor_value(&self) -> Fraction {
        self.knot_value(0)
    }

    /// The figure at and above 300%, `f(4)`.
    pub fn ceiling_value(&self) -> Fraction {
        self.knot_value(5)
    }

    /// Exact figure for `m = income / poverty_line`, both in cents.
    ///
    /// Callers guarantee `0 <= income <= 4 * poverty_line` and
    /// `poverty_line > 0`.
    pub(crate) fn evaluate_raw(&self, income: i128, poverty_line: i128) -> Fraction {
        let hundred_m = income * 100;
        let cmp = |knot: i64| hundred_m.cmp(&(knot as i128 * poverty_line));
        if cmp(KNOTS[1]) == Ordering::Less {
            return self.knot_value(0);
        }
        if cmp(KNOTS[5]) != Ordering::Less {
            return self.knot_value(5);
        }
        // largest knot index in 1..=4 with knot <= m
        let seg = (1..5).rev().find(|&i| cmp(KNOTS[i]) != Ordering::Less).unwrap_or(1);
        let (p, q) = (KNOTS[seg] as i128, KNOTS[seg + 1] as i128);
        let (lo, hi) = (self.values[seg] as i128, self.values[seg + 1] as i128);
        // lo + (hi - lo) * (m - p/100) / ((q - p)/100), with m = income / poverty_line
        let width = q - p;
        let num = lo * width * poverty_line + (hi - lo) * (hundred_m - p * poverty_line);
        Fraction::new(num, FIGURE_SCALE * width * poverty_line)
    }
}

/// Evaluate the applicable figure at `m`.
///
/// With `quantize`, the exact value is rounded half away from zero to the
/// nearest ten-thousandth, which is how the published percentage tables are
/// produced.
pub fn applicable_figure(m: ExactRatio, table: &FigureTable, quantize: bool) -> Result<Fraction, FigureError> {
    if m.numerator() < 0 || m.cmp_hundredths(DOMAIN_END) == Ordering::Greater {
        return Err(FigureError::OutOfDomain(m.to_string()));
    }
    let f = table.evaluate_raw(m.numerator(), m.denominator());
    Ok(if quantize { quantize_figure(f) } else { f })
}

pub(crate) fn quantize_figure(f: Fraction) -> Fraction {
    Fraction::new(f.round_to_scale(FIGURE_SCALE), FIGURE_SCALE)
}
