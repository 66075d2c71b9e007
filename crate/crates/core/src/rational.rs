//! Rational helpers shared by the symbolic modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `1 / n!`
pub fn inv_factorial(n: usize) -> Q {
    Q::new(BigInt::one(), factorial(n))
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Very large numerators or denominators: fall back to a scaled division.
        let n = x.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
        let d = x.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `p/q` or `p` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Largest absolute numerator among the given coefficients.
pub fn max_abs_numerator<'a>(coeffs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    coeffs
        .into_iter()
        .map(|c| c.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Formats `c · key`, dropping a unit coefficient (`X`, `-X`).
pub fn format_term(c: &Q, key: &str) -> String {
    if c.is_one() {
        key.to_string()
    } else if (-c).is_one() {
        format!("-{key}")
    } else {
        format!("{c}·{key}")
    }
}

/// Joins rendered terms into a signed sum: `a + b - c`.
pub fn join_terms<S: AsRef<str>>(terms: &[S]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let t = t.as_ref();
        match (i, t.strip_prefix('-')) {
            (0, _) => out.push_str(t),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("4"), Some(qi(4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_term(&q(1, 2), "[X,Y]"), "1/2·[X,Y]");
        assert_eq!(format_term(&qi(1), "X"), "X");
        assert_eq!(join_terms(&["X", "-1/2·Y", "Z"]), "X - 1/2·Y + Z");
        assert_eq!(format_term(&qi(-1), "X"), "-X");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(6), BigInt::from(720));
        assert_eq!(inv_factorial(3), q(1, 6));
    }
}
