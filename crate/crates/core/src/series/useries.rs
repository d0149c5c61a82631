//! One-variable truncated power series.

use std::fmt;

use num_traits::{One, Zero};

use super::rat::{display, int, Rat};
use crate::error::{Error, Result};

/// `c_0 + c_1 t + ... + c_N t^N` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct USeries {
    coeffs: Vec<Rat>,
}

impl USeries {
    pub fn zero(trunc: usize) -> Self {
        USeries { coeffs: vec![Rat::zero(); trunc + 1] }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = Rat::one();
        s
    }

    /// The series `t`.
    pub fn t(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if trunc >= 1 {
            s.coeffs[1] = Rat::one();
        }
        s
    }

    /// Pads with zeros or truncates so that the result has exactly `trunc + 1` coefficients.
    pub fn from_coeffs(mut coeffs: Vec<Rat>, trunc: usize) -> Self {
        coeffs.resize(trunc + 1, Rat::zero());
        USeries { coeffs }
    }

    pub fn from_ints(values: &[i64], trunc: usize) -> Self {
        Self::from_coeffs(values.iter().map(|&v| int(v)).collect(), trunc)
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Rat {
        self.coeffs.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn set(&mut self, n: usize, c: Rat) {
        if n < self.coeffs.len() {
            self.coeffs[n] = c;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        Self::from_coeffs((0..=n).map(|i| self.coeff(i) + other.coeff(i)).collect(), n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        USeries { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        let mut out = vec![Rat::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        USeries { coeffs: out }
    }

    pub fn inv(&self) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = a0.recip();
        let n = self.trunc();
        let mut out: Vec<Rat> = vec![Rat::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let s: Rat = (1..=k).map(|i| &self.coeffs[i] * &out[k - i]).sum();
            out[k] = -s * &inv0;
        }
        Ok(USeries { coeffs: out })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.trunc());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `outer(inner(t))`, truncated at the smaller truncation.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::Composition);
        }
        let n = self.trunc().min(inner.trunc());
        let inner = Self::from_coeffs(inner.coeffs.clone(), n);
        // Horner: a_0 + inner (a_1 + inner (a_2 + ...)))
        let mut acc = Self::zero(n);
        for c in self.coeffs.iter().take(n + 1).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }
}

/// The power series `mu(t)` with zero constant term solving `mu / (1 + mu)^2 = -t`,
/// obtained by iterating `mu <- -t (1 + mu)^2` to its fixed point mod `t^(N+1)`.
pub fn lagrange_invert_mu(trunc: usize) -> USeries {
    let t = USeries::t(trunc);
    let minus_t = t.scale(&-Rat::one());
    let mut mu = USeries::zero(trunc);
    for _ in 0..=trunc {
        let one_plus = USeries::one(trunc).add(&mu);
        let next = minus_t.mul(&one_plus.mul(&one_plus));
        if next == mu {
            break;
        }
        mu = next;
    }
    mu
}

impl fmt::Display for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", display(c))?,
                1 => write!(f, "({})*t", display(c))?,
                _ => write!(f, "({})*t^{}", display(c), n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `mu / (1 + mu)^2 + t`, which must vanish identically.
    fn residual(mu: &USeries) -> USeries {
        let n = mu.trunc();
        let one_plus = USeries::one(n).add(mu);
        let denom_inv = one_plus.mul(&one_plus).inv().unwrap();
        mu.mul(&denom_inv).add(&USeries::t(n))
    }

    #[test]
    fn mu_low_orders() {
        assert_eq!(lagrange_invert_mu(1), USeries::from_ints(&[0, -1], 1));
        assert_eq!(lagrange_invert_mu(4), USeries::from_ints(&[0, -1, 2, -5, 14], 4));
    }

    #[test]
    fn mu_residual_vanishes() {
        for n in 1..=12 {
            assert_eq!(residual(&lagrange_invert_mu(n)), USeries::zero(n), "N = {n}");
        }
    }

    #[test]
    fn compose_examples() {
        let mu = lagrange_invert_mu(4);
        assert_eq!(USeries::t(4).compose(&mu).unwrap(), mu);
        let partitions = USeries::from_ints(&[1, 1, 2, 3, 5], 4);
        let got = partitions.compose(&lagrange_invert_mu(2)).unwrap();
        // direct expansion: 1 + mu + 2 mu^2 with mu = -t + 2t^2
        assert_eq!(got, USeries::from_ints(&[1, -1, 4], 2));
        assert_eq!(partitions.compose(&USeries::zero(4)).unwrap(), USeries::one(4));
        assert_eq!(partitions.compose(&USeries::one(4)), Err(Error::Composition));
    }

    #[test]
    fn inverse() {
        let s = USeries::from_ints(&[1, 1], 5);
        assert_eq!(s.inv().unwrap(), USeries::from_ints(&[1, -1, 1, -1, 1, -1], 5));
        assert_eq!(USeries::t(3).inv(), Err(Error::NotInvertible));
    }
}
