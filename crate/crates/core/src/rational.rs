//! Exact rational helpers on top of [`BigRational`].
//!
//! `BigRational` already keeps values in lowest terms with a positive
//! denominator, so every coefficient in the crate is canonical.

use alloc::format;
use alloc::string::String;
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// `a/b` from machine integers. Panics on `b == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"num/den"` or a bare integer. A leading `-` is allowed on the
/// numerator only.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    if den.starts_with(['-', '+']) || num.is_empty() || den.is_empty() {
        return None;
    }
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Always `"num/den"`, including integers (`"5/1"`).
pub fn to_fraction_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil(q: &Rational) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

/// Exact square root when `q` is the square of a rational.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().magnitude().sqrt();
    let d = q.denom().magnitude().sqrt();
    if &(&n * &n) == q.numer().magnitude() && &(&d * &d) == q.denom().magnitude() {
        Some(Rational::new(
            BigInt::from_biguint(Sign::Plus, n),
            BigInt::from_biguint(Sign::Plus, d),
        ))
    } else {
        None
    }
}

/// Smallest nonnegative integer `r` with `r^2 >= q`.
pub fn ceil_sqrt(q: &Rational) -> BigInt {
    if !q.is_positive() {
        return BigInt::zero();
    }
    let c = ceil(q);
    let mut r = c.sqrt();
    let sq = |r: &BigInt| Rational::from_integer(r * r);
    while sq(&r) < *q {
        r += 1;
    }
    while r.is_positive() && sq(&(&r - 1u32)) >= *q {
        r -= 1;
    }
    r
}

pub fn pow(q: &Rational, k: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k {
        out *= q;
    }
    out
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

/// Rounds `q` down (`up == false`) or up to a multiple of `2^-bits`.
pub fn round_dyadic(q: &Rational, bits: u32, up: bool) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = q * Rational::from_integer(scale.clone());
    let n = if up { ceil(&scaled) } else { floor(&scaled) };
    Rational::new(n, scale)
}
