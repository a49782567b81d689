//! Exact rational scalars and their text forms.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, an integer, or a finite decimal literal such as `-31.4`
/// or `2.5e-3`. Decimals are converted exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num.trim())?;
        let den = parse_integer(den.trim())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s)
}

fn parse_integer(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('+').unwrap_or(s);
    let body = digits.strip_prefix('-').unwrap_or(digits);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("`{s}` is not an integer")));
    }
    digits
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("`{s}` is not an integer")))
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("`{s}` is not a finite decimal"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, unsigned) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let mut digits = String::with_capacity(whole.len() + frac.len());
    digits.push_str(whole);
    digits.push_str(frac);
    let mut value: BigInt = digits.parse().map_err(|_| bad())?;
    if negative {
        value = -value;
    }
    let scale = exponent - frac.len() as i64;
    if exponent.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10u8);
    let out = if scale >= 0 {
        Rational::from_integer(value * Pow::pow(&ten, scale as u64))
    } else {
        Rational::new(value, Pow::pow(&ten, (-scale) as u64))
    };
    Ok(out)
}

/// Canonical text form: an integer or `p/q`. Round-trips through
/// [`parse_rational`].
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders a finite decimal exactly when the denominator is of the form
/// 2^a·5^b, falling back to `p/q` otherwise.
pub fn format_decimal_exact(q: &Rational) -> String {
    let mut den = q.denom().clone();
    let two = BigInt::from(2u8);
    let five = BigInt::from(5u8);
    let mut twos = 0u64;
    let mut fives = 0u64;
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format_rational(q);
    }
    let places = twos.max(fives);
    if places == 0 {
        return q.numer().to_string();
    }
    let scaled = q * Rational::from_integer(Pow::pow(&BigInt::from(10u8), places));
    let n = scaled.to_integer();
    let digits = n.abs().to_string();
    let places = places as usize;
    let padded = if digits.len() <= places {
        let mut p = "0".repeat(places + 1 - digits.len());
        p.push_str(&digits);
        p
    } else {
        digits
    };
    let split = padded.len() - places;
    let sign = if n.is_negative() { "-" } else { "" };
    format!("{sign}{}.{}", &padded[..split], &padded[split..])
}

/// Smallest integer `>= q`.
pub fn ceil(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Largest integer `<= q`.
pub fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Nearest `f64`, for diagnostics only.
pub fn to_f64(q: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}

/// Exact conversion of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_rational("-31.4").unwrap(), ratio(-157, 5));
        assert_eq!(parse_rational("3.072").unwrap(), ratio(384, 125));
        assert_eq!(parse_rational("2.5e-3").unwrap(), ratio(1, 400));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("1E2").unwrap(), int(100));
    }

    #[test]
    fn fractions_parse_and_reduce() {
        assert_eq!(parse_rational("-157/5").unwrap(), ratio(-157, 5));
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn rejects_junk() {
        for s in [
            "", "abc", "1.2.3", "0.333...", "1/x", "-", ".", "1e", "inf", "NaN",
        ] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_decimal_exact(&ratio(-157, 5)), "-31.4");
        assert_eq!(format_decimal_exact(&ratio(384, 125)), "3.072");
        assert_eq!(format_decimal_exact(&ratio(1, 400)), "0.0025");
        assert_eq!(format_decimal_exact(&ratio(1, 3)), "1/3");
        assert_eq!(format_decimal_exact(&int(-4)), "-4");
        assert_eq!(format_rational(&ratio(-157, 5)), "-157/5");
    }
}
