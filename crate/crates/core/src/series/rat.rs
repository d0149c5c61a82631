//! Exact rational numbers and the small amount of combinatorics built on them.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rat = num_rational::BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalised binomial coefficient `binom(top, k)` for any integer top.
pub fn binomial_signed(top: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(top - i);
    }
    num / factorial(k)
}

/// `base^exp` for a possibly negative exponent. Zero to a negative power is a pole.
pub fn pow_i(base: &Rat, exp: i64) -> Result<Rat> {
    if exp >= 0 {
        Ok(num_traits::pow(base.clone(), exp as usize))
    } else if base.is_zero() {
        Err(Error::Pole(format!("0^{exp}")))
    } else {
        Ok(num_traits::pow(base.recip(), (-exp) as usize))
    }
}

pub fn sign(parity: i64) -> Rat {
    if parity.rem_euclid(2) == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// Decimal string pair used by every serialized form.
pub fn to_strings(x: &Rat) -> (String, String) {
    (x.numer().to_string(), x.denom().to_string())
}

pub fn from_strings(num: &str, den: &str) -> Result<Rat> {
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("bad integer {num:?}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("bad integer {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Invalid("zero denominator".into()));
    }
    Ok(Rat::new(n, d))
}

/// Parses "p", "p/q" or a finite decimal such as "-0.125".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        return from_strings(n, d);
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n: BigInt = digits
            .parse()
            .map_err(|_| Error::Invalid(format!("bad number {s:?}")))?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rat::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    from_strings(s, "1")
}

pub fn display(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

/// Exact square root when `x` is the square of a rational.
pub fn sqrt_exact(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Rational lower and upper bounds for `x^(1/k)`, `x >= 0`, whose gap is below `tol`.
pub fn root_bounds(x: &Rat, k: u32, tol: &Rat) -> (Rat, Rat) {
    assert!(!x.is_negative());
    let mut lo = Rat::zero();
    let mut hi = if x > &Rat::one() { x.clone() } else { Rat::one() };
    let two = int(2);
    while &(&hi - &lo) > tol {
        let mid = (&lo + &hi) / &two;
        // keep the bisection denominators small
        let mid = round_to(&mid, tol);
        if &num_traits::pow(mid.clone(), k as usize) <= x {
            if mid <= lo {
                break;
            }
            lo = mid;
        } else {
            if mid >= hi {
                break;
            }
            hi = mid;
        }
    }
    (lo, hi)
}

fn round_to(x: &Rat, tol: &Rat) -> Rat {
    let scale = (tol.recip() * int(4)).ceil();
    (x * &scale).floor() / scale
}
