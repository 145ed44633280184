//! Arbitrary-precision rationals and the handful of helpers the set algebra needs.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` for any signed exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// Fractional part in `[0,1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Largest `m` with `2^m <= x`, for `x > 0`.
pub fn floor_log2(x: &Rational) -> i64 {
    assert!(x.is_positive(), "floor_log2 of non-positive value");
    let n = x.numer().bits() as i64;
    let d = x.denom().bits() as i64;
    // 2^(n-1) <= numer < 2^n and 2^(d-1) <= denom < 2^d, so the answer is n-d or n-d-1.
    let m = n - d;
    if pow2(m) <= *x {
        m
    } else {
        m - 1
    }
}

/// Smallest `m` with `2^m >= x`, for `x > 0`.
pub fn ceil_log2(x: &Rational) -> i64 {
    let m = floor_log2(x);
    if pow2(m) == *x {
        m
    } else {
        m + 1
    }
}

/// Parses `p/q`, `-p/q`, or an integer.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    parse_rational_at(s, 0)
}

pub(crate) fn parse_rational_at(s: &str, offset: usize) -> Result<Rational, ParseError> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    if t.is_empty() {
        return Err(ParseError::new(offset, "expected a rational number"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |txt: &str, at: usize| -> Result<BigInt, ParseError> {
        let body = txt.strip_prefix('+').unwrap_or(txt);
        let digits = body.strip_prefix('-').unwrap_or(body);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseError::new(at, format!("invalid integer '{txt}'")));
        }
        body.parse::<BigInt>()
            .map_err(|e| ParseError::new(at, e.to_string()))
    };
    let n = parse_int(num, offset + lead)?;
    let d = match den {
        Some(d) => {
            let at = offset + lead + t.find('/').unwrap_or(0) + 1;
            let d = parse_int(d, at)?;
            if d.is_zero() {
                return Err(ParseError::new(at, "zero denominator"));
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-1/4").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn log2_bounds() {
        assert_eq!(floor_log2(&rat(1, 1)), 0);
        assert_eq!(floor_log2(&rat(3, 1)), 1);
        assert_eq!(floor_log2(&rat(1, 3)), -2);
        assert_eq!(floor_log2(&rat(1, 4)), -2);
        assert_eq!(floor_log2(&rat(5, 24)), -3);
        assert_eq!(ceil_log2(&rat(1, 4)), -2);
        assert_eq!(ceil_log2(&rat(5, 4)), 1);
        for num in 1..200 {
            for den in 1..40 {
                let x = rat(num, den);
                let m = floor_log2(&x);
                assert!(pow2(m) <= x && x < pow2(m + 1));
            }
        }
    }

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
        assert_eq!(frac(&rat(7, 3)), rat(1, 3));
        assert_eq!(frac(&int(-2)), int(0));
    }
}
