// SPDX-License-Identifier: Apache-2.0

//! Exact rational parameters.
//!
//! Thresholds such as `(1 + α)|L(v)|` or `(1 − ε)d(v)` are compared against
//! integers, so they are carried as exact fractions and only converted to
//! floating point where a formula needs `exp` or `sqrt`.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use thiserror::Error;

pub type Fraction = Ratio<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse {input:?} as a fraction (expected \"num/den\", an integer, or a finite decimal)")]
pub struct ParseFractionError {
    pub input: String,
}

/// Parses `"3/7"`, `"12"`, or `"0.499"` into an exact fraction.
pub fn parse_fraction(s: &str) -> Result<Fraction, ParseFractionError> {
    let err = || ParseFractionError { input: s.to_string() };
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| err())?;
        let den: i64 = den.trim().parse().map_err(|_| err())?;
        if den == 0 {
            return Err(err());
        }
        return Ok(Fraction::new(num, den));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) || frac_part.len() > 15 {
            return Err(err());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let int_val: i64 = if int_digits.is_empty() { 0 } else { int_digits.parse().map_err(|_| err())? };
        let den = 10_i64.pow(frac_part.len() as u32);
        let frac_val: i64 = frac_part.parse().map_err(|_| err())?;
        let num = int_val.checked_mul(den).and_then(|x| x.checked_add(frac_val)).ok_or_else(err)?;
        return Ok(Fraction::new(if negative { -num } else { num }, den));
    }
    t.parse::<i64>().map(Fraction::from_integer).map_err(|_| err())
}

pub fn to_f64(f: Fraction) -> f64 {
    f.to_f64().unwrap_or(f64::NAN)
}

/// Formats as `"num/den"` (or just `"num"` for integers), the config file convention.
pub fn format_fraction(f: Fraction) -> String {
    if *f.denom() == 1 {
        f.numer().to_string()
    } else {
        format!("{}/{}", f.numer(), f.denom())
    }
}

#[cfg(test)]
pub(crate) fn frac(n: i64, d: i64) -> Fraction {
    Fraction::new(n, d)
}

pub(crate) fn int(n: usize) -> Fraction {
    Fraction::from_integer(n as i64)
}
