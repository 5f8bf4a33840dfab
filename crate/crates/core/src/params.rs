//! Tax-year parameter documents.
//!
//! A document is TOML restricted to a handful of dotted keys:
//!
//! ```toml
//! schema_version = 1
//! year = "2019"
//! figure.j = 0.0208   # f at 100%, flat up to 133%
//! figure.k = 0.0311   # f at 133%
//! figure.l = 0.0415   # f at 150%
//! figure.a = 0.0654   # f at 200%
//! figure.b = 0.0836   # f at 250%
//! figure.c = 0.0986   # f at 300% and above
//! repay.single.r = 300
//! repay.single.s = 800
//! repay.single.t = 1325
//! # repay.other.{r,s,t} overrides the default doubling for other statuses
//! ```
//!
//! Figure values are read as exact decimals with at most four places.

use std::path::Path;

use crate::error::ParamsError;
use crate::figure::FigureTable;
use crate::money::Money;
use crate::reconcile::RepaymentTable;

pub const SCHEMA_VERSION: i64 = 1;

const FIGURE_KEYS: [&str; 6] = ["j", "k", "l", "a", "b", "c"];
const REPAY_KEYS: [&str; 3] = ["r", "s", "t"];

const BUNDLED: [(&str, &str); 2] =
    [("2018", include_str!("../data/2018.toml")), ("2019", include_str!("../data/2019.toml"))];

/// Everything that changes from one tax year to the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaxYearParams {
    pub year: String,
    pub figure_table: FigureTable,
    pub repayment_table: RepaymentTable,
}

impl TaxYearParams {
    /// Parameters shipped with the crate, if `year` is one of them.
    pub fn bundled(year: &str) -> Option<TaxYearParams> {
        BUNDLED
            .iter()
            .find(|(y, _)| *y == year)
            .map(|(_, doc)| load_tax_year_params(doc).expect("bundled parameter file is valid"))
    }

    pub fn bundled_years() -> impl Iterator<Item = &'static str> {
        BUNDLED.iter().map(|(y, _)| *y)
    }

    pub fn from_path(path: &Path) -> Result<TaxYearParams, ParamsError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ParamsError::Syntax(format!("{}: {e}", path.display())))?;
        load_tax_year_params(&text)
    }

    /// Render back to the document format. Reloading yields equal parameters.
    pub fn to_document(&self) -> String {
        let mut out = format!("schema_version = {SCHEMA_VERSION}\nyear = \"{}\"\n\n", self.year);
        for (key, v) in FIGURE_KEYS.iter().zip(self.figure_table.values()) {
            out.push_str(&format!("figure.{key} = {}.{:04}\n", v / 10_000, v % 10_000));
        }
        out.push('\n');
        for (key, v) in REPAY_KEYS.iter().zip(self.repayment_table.single()) {
            out.push_str(&format!("repay.single.{key} = {}\n", render_amount(v)));
        }
        if let Some(other) = self.repayment_table.other_override() {
            for (key, v) in REPAY_KEYS.iter().zip(other) {
                out.push_str(&format!("repay.other.{key} = {}\n", render_amount(v)));
            }
        }
        out
    }
}

fn render_amount(m: Money) -> String {
    if m.cents() % 100 == 0 {
        (m.cents() / 100).to_string()
    } else {
        format!("\"{m}\"")
    }
}

/// Parse and validate a parameter document.
pub fn load_tax_year_params(source: &str) -> Result<TaxYearParams, ParamsError> {
    let root: toml::Table =
        source.parse().map_err(|e: toml::de::Error| ParamsError::Syntax(e.message().to_string()))?;

    let version = match lookup(&root, "schema_version")? {
        toml::Value::Integer(v) => *v,
        _ => return Err(invalid("schema_version", "expected an integer")),
    };
    if version != SCHEMA_VERSION {
        return Err(ParamsError::Schema(version));
    }

    let year = match lookup(&root, "year")? {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        _ => return Err(invalid("year", "expected a string or integer")),
    };

    let mut values = [0i64; 6];
    for (slot, key) in values.iter_mut().zip(FIGURE_KEYS) {
        let path = format!("figure.{key}");
        *slot = ten_thousandths(&path, lookup(&root, &path)?)?;
    }
    let figure_table = FigureTable::new(values).map_err(|(lo, hi)| {
        if lo == hi {
            invalid(&format!("figure.{}", FIGURE_KEYS[lo]), "figure values must lie strictly between 0 and 0.1")
        } else {
            ParamsError::NotMonotone {
                lower: format!("figure.{}", FIGURE_KEYS[lo]),
                upper: format!("figure.{}", FIGURE_KEYS[hi]),
            }
        }
    })?;

    let single = repayment_triple(&root, "repay.single", true)?.expect("required triple");
    let other = repayment_triple(&root, "repay.other", false)?;
    let repayment_table = RepaymentTable::new(single, other).map_err(ParamsError::RepaymentOrder)?;

    Ok(TaxYearParams { year, figure_table, repayment_table })
}

fn repayment_triple(root: &toml::Table, prefix: &str, required: bool) -> Result<Option<[Money; 3]>, ParamsError> {
    if !required && lookup(root, prefix).is_err() {
        return Ok(None);
    }
    let mut out = [Money::ZERO; 3];
    for (slot, key) in out.iter_mut().zip(REPAY_KEYS) {
        let path = format!("{prefix}.{key}");
        *slot = amount(&path, lookup(root, &path)?)?;
    }
    Ok(Some(out))
}

fn lookup<'a>(root: &'a toml::Table, path: &str) -> Result<&'a toml::Value, ParamsError> {
    let mut parts = path.split('.');
    let first = parts.next().unwrap_or_default();
    let mut cur = root.get(first).ok_or_else(|| ParamsError::Missing(path.to_string()))?;
    for part in parts {
        cur = cur.as_table().and_then(|t| t.get(part)).ok_or_else(|| ParamsError::Missing(path.to_string()))?;
    }
    Ok(cur)
}

fn invalid(key: &str, reason: &str) -> ParamsError {
    ParamsError::Invalid { key: key.to_string(), reason: reason.to_string() }
}

/// `0.0201` -> 201. Floats go through their shortest round-trip rendering, so
/// the digits compared are the digits written in the file.
fn ten_thousandths(key: &str, value: &toml::Value) -> Result<i64, ParamsError> {
    let text = match value {
        toml::Value::Float(f) => format!("{f}"),
        toml::Value::String(s) => s.trim().to_string(),
        toml::Value::Integer(i) => i.to_string(),
        _ => return Err(invalid(key, "expected a decimal")),
    };
    parse_decimal(&text, 4).ok_or_else(|| invalid(key, &format!("`{text}` is not a decimal with at most four places")))
}

fn amount(key: &str, value: &toml::Value) -> Result<Money, ParamsError> {
    match value {
        toml::Value::Integer(i) => Ok(Money::from_dollars(*i)),
        toml::Value::String(s) => s.parse().map_err(|_| invalid(key, &format!("`{s}` is not a dollar amount"))),
        _ => Err(invalid(key, "expected whole dollars")),
    }
}

/// Parse a non-negative decimal into integer units of `10^-places`.
pub(crate) fn parse_decimal(text: &str, places: u32) -> Option<i64> {
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if frac.len() > places as usize {
        return None;
    }
    let scale = 10i64.pow(places);
    let w: i64 = whole.parse().ok()?;
    let f: i64 = if frac.is_empty() { 0 } else { frac.parse::<i64>().ok()? * 10i64.pow(places - frac.len() as u32) };
    w.checked_mul(scale)?.checked_add(f)
}
