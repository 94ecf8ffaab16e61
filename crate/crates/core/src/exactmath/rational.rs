//! Rational numbers and the small helpers built around them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::MathError;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Integer literal as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` as a rational. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Parses `"p"` or `"p/q"` (optional sign, decimal integers). Decimal
/// points and exponents are rejected so that no float ever leaks in.
pub fn parse_rational(s: &str) -> Result<Rational, MathError> {
    let bad = || MathError::Parse(format!("not a rational literal: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let is_int = |t: &str| {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) {
        return Err(bad());
    }
    let num: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => {
            if !is_int(d) {
                return Err(bad());
            }
            d.trim_start_matches('+').parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(MathError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub(crate) fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("2/3").unwrap(), ratio(2, 3));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert_eq!(parse_rational("+7/-1").unwrap(), rat(-7));
        assert_eq!(parse_rational("0/5").unwrap(), rat(0));
    }

    #[test]
    fn parse_rejects_floats_and_zero_denominators() {
        for bad in ["0.5", "1e3", "", "/3", "1/", "1/0", "a/b", "1//2"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_form_is_reduced() {
        let r = parse_rational("10/-4").unwrap();
        assert_eq!(format_rational(&r), "-5/2");
        assert_eq!(format_rational(&rat(0)), "0");
        assert!(r.denom() > &BigInt::zero());
    }
}
