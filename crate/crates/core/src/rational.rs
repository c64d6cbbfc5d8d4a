//! Exact rationals over arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub use num_rational::BigRational as Rational;

/// Builds `p/q` from machine integers. Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for m in 2..=n {
        acc *= m;
    }
    Rational::from_integer(acc)
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for m in 0..k {
        acc = acc * (n - m) / (m + 1);
    }
    Rational::from_integer(acc)
}

/// Falling factorial `n (n-1) ... (n-i+1)`.
pub fn falling(n: u32, i: u32) -> Rational {
    let mut acc = BigInt::one();
    for m in 0..i {
        acc *= n as i64 - m as i64;
    }
    Rational::from_integer(acc)
}

/// Renders as `p` or `p/q`.
pub fn fmt_rat(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, or `p/q` with `q != 0`.
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p).ok()?;
    let q = BigInt::from_str(q).ok()?;
    if q.is_zero() {
        return None;
    }
    Some(Rational::new(p, q))
}

pub fn is_unit(r: &Rational) -> bool {
    r.is_one()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}
