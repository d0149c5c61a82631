//! Gaussian rationals `a + b i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::rat::{display, int, parse_rat, sqrt_exact};
use crate::series::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::real(int(n))
    }

    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|x|^2`.
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(Error::Degenerate("division by zero".into()));
        }
        Ok(GaussRat { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact square root when one exists in `ℚ(i)`.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.im.is_zero() {
            return if self.re.is_negative() {
                sqrt_exact(&-self.re.clone()).map(|b| GaussRat::new(Rat::zero(), b))
            } else {
                sqrt_exact(&self.re).map(GaussRat::real)
            };
        }
        let r = sqrt_exact(&self.norm_sq())?;
        let a = sqrt_exact(&((&r + &self.re) / int(2)))?;
        let b = &self.im / (int(2) * &a);
        let s = GaussRat::new(a, b);
        (&s * &s == *self).then_some(s)
    }

    /// Parses `a`, `a+bi`, `a-bi`, `bi`, with rational `a`, `b`.
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Invalid("empty number".into()));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(GaussRat::real(parse_rat(&t)?));
        };
        // split at the last sign that is not the leading one and not part of a fraction
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            s => s.strip_prefix('+').unwrap_or(s),
        };
        Ok(GaussRat::new(parse_rat(re)?, parse_rat(im)?))
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", display(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", display(&self.im));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}i", display(&self.re), sign, display(&self.im.abs()))
    }
}

impl From<Rat> for GaussRat {
    fn from(r: Rat) -> Self {
        GaussRat::real(r)
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Div for &GaussRat {
    type Output = GaussRat;
    /// Panics on division by zero; use [`GaussRat::checked_div`] for fallible input.
    fn div(self, o: &GaussRat) -> GaussRat {
        self.checked_div(o).expect("division by zero")
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussRat {
            type Output = GaussRat;
            fn $m(self, o: GaussRat) -> GaussRat {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat::rat;

    #[test]
    fn arithmetic() {
        let a = GaussRat::new(int(1), int(2));
        let b = GaussRat::new(rat(1, 2), int(-1));
        assert_eq!(&a * &b, GaussRat::new(rat(5, 2), int(0)));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(a.norm_sq(), int(5));
        assert!(GaussRat::zero().inv().is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(GaussRat::int(-4).sqrt_exact(), Some(GaussRat::new(int(0), int(2))));
        let s = GaussRat::new(int(3), int(4)).sqrt_exact().unwrap();
        assert_eq!(&s * &s, GaussRat::new(int(3), int(4)));
        assert!(GaussRat::int(2).sqrt_exact().is_none());
        assert!(GaussRat::new(int(1), int(1)).sqrt_exact().is_none());
    }

    #[test]
    fn parse_display() {
        for s in ["3", "-1/2", "1+2i", "1/3-2/5i", "i", "-i", "2i"] {
            let x = GaussRat::parse(s).unwrap();
            assert_eq!(GaussRat::parse(&x.to_string()).unwrap(), x, "{s}");
        }
        assert_eq!(GaussRat::parse("-i").unwrap(), GaussRat::new(int(0), int(-1)));
        assert!(GaussRat::parse("abc").is_err());
    }
}
