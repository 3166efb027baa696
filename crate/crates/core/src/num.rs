//! Rational helpers: construction, parsing, printing.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CoreError;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Q, CoreError> {
    let t = s.trim();
    let bad = || CoreError::BadRational(s.to_string());
    match t.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(CoreError::ZeroDenominator(s.to_string()));
            }
            Ok(Q::new(p, d))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(p))
        }
    }
}

/// Always `p/q`, reduced, denominator positive.
pub fn fmt_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Rounds half away from zero to `digits` places after the point.
pub fn decimal(x: &Q, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = x * Q::from_integer(scale.clone());
    let (n, d) = (scaled.numer().abs(), scaled.denom().clone());
    let (mut quo, rem) = n.div_rem(&d);
    if rem * 2u32 >= d {
        quo += 1u32;
    }
    let neg = x.is_negative() && !quo.is_zero();
    let (int, frac) = quo.div_rem(&scale);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", frac.to_string(), width = digits as usize));
    }
    out
}

pub fn decimal12(x: &Q) -> String {
    decimal(x, 12)
}

pub fn is_square_int(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root when `x` is the square of a rational.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    let n = is_square_int(x.numer())?;
    let d = is_square_int(x.denom())?;
    Some(Q::new(n, d))
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn pow_u(x: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("2/4").unwrap(), q(1, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), qi(-3));
        assert_eq!(fmt_rational(&q(-6, 4)), "-3/2");
        assert_eq!(fmt_rational(&qi(5)), "5/1");
        assert!(matches!(parse_rational("1/0"), Err(CoreError::ZeroDenominator(_))));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal12(&q(1, 3)), "0.333333333333");
        assert_eq!(decimal12(&q(2, 3)), "0.666666666667");
        assert_eq!(decimal12(&q(-1, 8)), "-0.125000000000");
        assert_eq!(decimal(&q(5, 2), 0), "3");
        assert_eq!(decimal12(&qi(4)), "4.000000000000");
    }

    #[test]
    fn exact_roots() {
        assert_eq!(sqrt_exact(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(sqrt_exact(&q(2, 1)), None);
    }
}
