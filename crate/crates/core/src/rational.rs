//! Exact rational helpers. Every value in the library is a [`Rational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"`, `"num"` or a decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::parse(format!("rational {s:?}"), "expected \"num/den\"");
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::parse(format!("rational {s:?}"), "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = w.abs() * &scale + f;
        let num = if negative { -mag } else { mag };
        return Ok(Rational::new(num, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical `"num/den"` text. Integers are written without a denominator.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering used for uncertified estimates.
pub fn format_decimal(q: &Rational) -> String {
    format!("{:.6}", to_f64(q))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn ceil_to_i64(q: &Rational) -> i64 {
    q.ceil().to_integer().to_i64().expect("ceiling fits in i64")
}

pub fn floor_to_i64(q: &Rational) -> i64 {
    q.floor().to_integer().to_i64().expect("floor fits in i64")
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

pub fn max_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    values.into_iter().max().cloned()
}

pub fn min_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    values.into_iter().min().cloned()
}

/// Serde adapter writing rationals as `"num/den"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn format_forms() {
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&int(3)), "3");
        assert_eq!(format_rational(&rat(-1, 3)), "-1/3");
        assert_eq!(format_decimal(&rat(42, 64)), "0.656250");
    }
}
