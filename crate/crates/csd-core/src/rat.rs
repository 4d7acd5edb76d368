//! Exact rational scalars.
//!
//! Everything in the engine is computed over arbitrary-precision rationals;
//! there is no floating point anywhere and no tolerance in any comparison.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Scalar type of the whole engine.
pub type Rat = BigRational;

/// `p/q` as a `Rat`. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "rational with zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a `Rat`.
pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Parses `"p"` or `"p/q"` with optional leading sign. Decimal points are
/// rejected: the input language is exact.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let bad = || Error::BadRational(s.to_string());
    let s = s.trim();
    if s.contains('.') {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(Error::BadRational(format!("{s} (zero denominator)")));
    }
    Ok(Rat::new(p, q))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise (q > 0).
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Generalized binomial coefficient `C(a, k) = a(a-1)...(a-k+1)/k!`.
pub fn binomial(a: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc *= (a - rat_int(i64::from(i))) / rat_int(i64::from(i) + 1);
    }
    acc
}

/// True when `r` is a (possibly negative) integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// True when `r` is a strictly positive integer.
pub fn is_positive_integer(r: &Rat) -> bool {
    is_integer(r) && r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-1", "7/3", "-5/4", "12"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // non-canonical inputs normalize
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(format_rat(&parse_rat("2/-4").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1.5", "a", "1/0", "1/ /2", "--3"] {
            assert!(parse_rat(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn binomial_matches_integer_pascal() {
        // C(5, k)
        let five = rat_int(5);
        let expect = [1i64, 5, 10, 10, 5, 1, 0];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(binomial(&five, k as u32), rat_int(*e), "k = {k}");
        }
    }

    #[test]
    fn binomial_fractional_exponent() {
        // C(-1/2, 2) = (-1/2)(-3/2)/2 = 3/8
        assert_eq!(binomial(&rat(-1, 2), 2), rat(3, 8));
        // C(1/2, 3) = (1/2)(-1/2)(-3/2)/6 = 1/16
        assert_eq!(binomial(&rat(1, 2), 3), rat(1, 16));
    }
}
