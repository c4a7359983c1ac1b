//! Exact decimal costs.
//!
//! Costs are held as signed 64-bit integers counting units of `10^-decimals`.
//! Parsing never rounds: a literal with more fractional digits than the
//! configured precision is rejected.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use thiserror::Error;

pub const DEFAULT_DECIMALS: u32 = 6;
pub const MAX_DECIMALS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("invalid decimal literal {0:?}")]
    Invalid(String),
    #[error("decimal literal {literal:?} has more than {decimals} fractional digits")]
    ExcessPrecision { literal: String, decimals: u32 },
    #[error("decimal literal {0:?} overflows the 64-bit cost range")]
    Overflow(String),
    #[error("precision of {0} decimals is outside 0..={MAX_DECIMALS}")]
    BadPrecision(u32),
}

/// Number of fractional decimal digits a cost carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    decimals: u32,
}

impl Precision {
    pub fn new(decimals: u32) -> Result<Self, CostError> {
        if decimals > MAX_DECIMALS {
            return Err(CostError::BadPrecision(decimals));
        }
        Ok(Precision { decimals })
    }

    pub fn decimals(self) -> u32 {
        self.decimals
    }

    /// Raw units per whole cost unit.
    pub fn scale(self) -> i64 {
        10i64.pow(self.decimals)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            decimals: DEFAULT_DECIMALS,
        }
    }
}

/// A cost in raw scaled units. Interpretation requires the [`Precision`]
/// of the system it belongs to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(i64);

impl Cost {
    pub const ZERO: Cost = Cost(0);

    pub fn from_raw(raw: i64) -> Self {
        Cost(raw)
    }

    pub fn raw(self) -> i64 {
        self.0
    }

    /// Whole-unit cost, e.g. `Cost::from_units(3, p)` is `3` at any precision.
    pub fn from_units(units: i64, precision: Precision) -> Self {
        Cost(units * precision.scale())
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn checked_add(self, other: Cost) -> Option<Cost> {
        self.0.checked_add(other.0).map(Cost)
    }

    pub fn parse(literal: &str, precision: Precision) -> Result<Cost, CostError> {
        let s = literal.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty())
            || !digits_ok(int_part)
            || !digits_ok(frac_part)
        {
            return Err(CostError::Invalid(literal.to_string()));
        }
        let significant = frac_part.trim_end_matches('0');
        if significant.len() > precision.decimals as usize {
            return Err(CostError::ExcessPrecision {
                literal: literal.to_string(),
                decimals: precision.decimals,
            });
        }
        let overflow = || CostError::Overflow(literal.to_string());
        let mut raw: i64 = 0;
        for b in int_part.bytes() {
            raw = raw
                .checked_mul(10)
                .and_then(|r| r.checked_add(i64::from(b - b'0')))
                .ok_or_else(overflow)?;
        }
        raw = raw.checked_mul(precision.scale()).ok_or_else(overflow)?;
        let mut frac: i64 = 0;
        for (k, b) in significant.bytes().enumerate() {
            let place = 10i64.pow(precision.decimals - 1 - k as u32);
            frac += i64::from(b - b'0') * place;
        }
        raw = raw.checked_add(frac).ok_or_else(overflow)?;
        Ok(Cost(if negative { -raw } else { raw }))
    }

    /// Canonical decimal rendering: no trailing fractional zeros, no
    /// trailing dot.
    pub fn to_decimal(self, precision: Precision) -> String {
        let scale = precision.scale() as u64;
        let neg = self.0 < 0;
        let abs = self.0.unsigned_abs();
        let int = abs / scale;
        let frac = abs % scale;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int.to_string());
        if frac != 0 {
            let digits = format!("{:0width$}", frac, width = precision.decimals as usize);
            out.push('.');
            out.push_str(digits.trim_end_matches('0'));
        }
        out
    }

    pub fn to_f64(self, precision: Precision) -> f64 {
        self.0 as f64 / precision.scale() as f64
    }

    pub fn display(self, precision: Precision) -> CostDisplay {
        CostDisplay(self, precision)
    }
}

impl Add for Cost {
    type Output = Cost;

    /// Panics on overflow; validated systems bound every partial sum by the
    /// total of all costs, which is checked to fit.
    fn add(self, rhs: Cost) -> Cost {
        self.checked_add(rhs).expect("cost overflow")
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, |a, b| a + b)
    }
}

pub struct CostDisplay(Cost, Precision);

impl fmt::Display for CostDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_decimal(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(Cost::parse("1", p()).unwrap().raw(), 1_000_000);
        assert_eq!(Cost::parse("0.5", p()).unwrap().raw(), 500_000);
        assert_eq!(Cost::parse("2.000001", p()).unwrap().raw(), 2_000_001);
        assert_eq!(Cost::parse(".25", p()).unwrap().raw(), 250_000);
        assert_eq!(Cost::parse("-1", p()).unwrap().raw(), -1_000_000);
        assert_eq!(Cost::parse("1.5000000", p()).unwrap().raw(), 1_500_000);
    }

    #[test]
    fn rejects_garbage_and_excess_digits() {
        assert!(matches!(Cost::parse("abc", p()), Err(CostError::Invalid(_))));
        assert!(matches!(Cost::parse("", p()), Err(CostError::Invalid(_))));
        assert!(matches!(Cost::parse(".", p()), Err(CostError::Invalid(_))));
        assert!(matches!(Cost::parse("1e3", p()), Err(CostError::Invalid(_))));
        assert!(matches!(
            Cost::parse("0.0000001", p()),
            Err(CostError::ExcessPrecision { .. })
        ));
        assert!(matches!(
            Cost::parse("99999999999999999999", p()),
            Err(CostError::Overflow(_))
        ));
    }

    #[test]
    fn canonical_rendering() {
        let prec = p();
        for s in ["0", "1", "3", "1.5", "0.000001", "-2.25", "16"] {
            assert_eq!(Cost::parse(s, prec).unwrap().to_decimal(prec), s);
        }
        assert_eq!(Cost::parse("1.50", prec).unwrap().to_decimal(prec), "1.5");
    }

    #[test]
    fn configurable_precision() {
        let two = Precision::new(2).unwrap();
        assert_eq!(Cost::parse("1.25", two).unwrap().raw(), 125);
        assert!(Cost::parse("1.255", two).is_err());
        let zero = Precision::new(0).unwrap();
        assert_eq!(Cost::parse("7", zero).unwrap().to_decimal(zero), "7");
        assert!(Precision::new(13).is_err());
    }
}
