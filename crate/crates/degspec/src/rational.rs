//! Exact rational scalars.
//!
//! All cycle coordinates, intersection numbers and degrees in this crate are
//! `Rational` values: arbitrary-precision fractions kept in lowest terms with
//! positive denominator. `num_rational::BigRational` already enforces both
//! invariants, so it is used directly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Render as `"num/den"`, or just `"num"` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"num"` or `"num/den"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Input(format!("bad numerator in rational '{s}'")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Input(format!("bad denominator in rational '{s}'")))?;
    if den.is_zero() {
        return Err(Error::Input(format!("zero denominator in rational '{s}'")));
    }
    Ok(Rational::new(num, den))
}

/// Best-effort conversion to f64 (used only for reporting and root seeding,
/// never for exact decisions).
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a scaled quotient for very large operands
        let digits = r.numer().abs().to_string().len() as i32 - r.denom().to_string().len() as i32;
        let scaled = r / Rational::from_integer(BigInt::from(10).pow(digits.unsigned_abs()));
        let base = scaled.to_f64().unwrap_or(f64::NAN);
        base * 10f64.powi(digits)
    })
}

/// Fixed 12-significant-digit decimal rendering for report output.
pub fn format_decimal(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let prec = (11 - exp).max(0) as usize;
    let s = format!("{x:.prec$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
