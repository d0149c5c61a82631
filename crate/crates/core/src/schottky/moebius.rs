//! Möbius maps over `ℚ(i)` and the Schottky coordinates of a loxodromic generator.
//!
//! Maps are stored projectively: `(a, b, c, d)` and `(λa, λb, λc, λd)` are the
//! same map. The multiplier only depends on the invariant `tr² / det`, so no
//! square root is needed to normalise the determinant.

use num_traits::{One, Zero};

use super::gauss::GaussRat;
use crate::error::{Error, Result};
use crate::series::rat::int;
use crate::series::Rat;

/// A point of the Riemann sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Finite(GaussRat),
    Infinity,
}

impl Point {
    pub fn finite(&self) -> Option<&GaussRat> {
        match self {
            Point::Finite(x) => Some(x),
            Point::Infinity => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MoebiusMap {
    pub a: GaussRat,
    pub b: GaussRat,
    pub c: GaussRat,
    pub d: GaussRat,
}

impl PartialEq for MoebiusMap {
    /// Projective equality: the coefficient vectors are proportional.
    fn eq(&self, o: &Self) -> bool {
        let s = [&self.a, &self.b, &self.c, &self.d];
        let t = [&o.a, &o.b, &o.c, &o.d];
        (0..4).all(|i| (0..4).all(|j| s[i] * t[j] == s[j] * t[i]))
    }
}

impl Eq for MoebiusMap {}

impl MoebiusMap {
    pub fn new(a: GaussRat, b: GaussRat, c: GaussRat, d: GaussRat) -> Result<Self> {
        let m = MoebiusMap { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::Degenerate("ad - bc = 0".into()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        MoebiusMap { a: GaussRat::one(), b: GaussRat::zero(), c: GaussRat::zero(), d: GaussRat::one() }
    }

    pub fn det(&self) -> GaussRat {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> GaussRat {
        &self.a + &self.d
    }

    /// `tr² / det`, the conjugacy invariant of the projective class.
    pub fn trace_invariant(&self) -> GaussRat {
        let t = self.trace();
        &(&t * &t) / &self.det()
    }

    pub fn apply(&self, x: &Point) -> Point {
        match x {
            Point::Infinity => {
                if self.c.is_zero() {
                    Point::Infinity
                } else {
                    Point::Finite(&self.a / &self.c)
                }
            }
            Point::Finite(x) => {
                let num = &(&self.a * x) + &self.b;
                let den = &(&self.c * x) + &self.d;
                if den.is_zero() {
                    Point::Infinity
                } else {
                    Point::Finite(&num / &den)
                }
            }
        }
    }

    pub fn compose(&self, o: &Self) -> Self {
        MoebiusMap {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Derivative `det / (c x + d)^2` at a finite point.
    pub fn derivative(&self, x: &GaussRat) -> Result<GaussRat> {
        let den = &(&self.c * x) + &self.d;
        self.det().checked_div(&(&den * &den))
    }

    /// Loxodromic unless `tr²/det` is real and lies in `[0, 4]`.
    pub fn is_loxodromic(&self) -> bool {
        let k = self.trace_invariant();
        !(k.is_real() && k.re >= Rat::zero() && k.re <= int(4))
    }
}

/// `x ↦ w + q / (x - z)`.
pub fn from_wzq(w: &GaussRat, z: &GaussRat, q: &GaussRat) -> Result<MoebiusMap> {
    if q.is_zero() {
        return Err(Error::Degenerate("q = 0 collapses the map".into()));
    }
    MoebiusMap::new(w.clone(), q - &(w * z), GaussRat::one(), -z)
}

/// Fixed points and multiplier of a loxodromic map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoints {
    /// Attracting fixed point `W`.
    pub attracting: GaussRat,
    /// Repelling fixed point `Z`.
    pub repelling: GaussRat,
    /// Multiplier at `W`, with `0 < |μ| < 1`.
    pub multiplier: GaussRat,
    /// True when the discriminant is a square in `ℚ(i)` and every value is exact.
    pub exact: bool,
    /// Bound on `|error|²` of each fixed point; zero when exact.
    pub error_sq_bound: Rat,
}

/// Squared tolerance `10^-40` for approximate fixed points.
fn default_tol_sq() -> Rat {
    Rat::new(1.into(), num_bigint::BigInt::from(10).pow(40))
}

/// A Gaussian rational `s` with `|s - √x|² <= bound` for one of the square roots,
/// and that bound.
pub fn sqrt_approx(x: &GaussRat, tol_sq: &Rat) -> (GaussRat, Rat) {
    if let Some(s) = x.sqrt_exact() {
        return (s, Rat::zero());
    }
    let grid = Rat::new(1.into(), num_bigint::BigInt::from(2).pow(160));
    let round = |v: &Rat| (v / &grid).round() * &grid;
    let f = crate::series::rat::to_f64;
    let r = f(&x.norm_sq()).sqrt().sqrt();
    let theta = f(&x.im).atan2(f(&x.re)) / 2.0;
    let seed = |v: f64| Rat::from_float(v).unwrap_or_else(Rat::one);
    let mut s = GaussRat::new(seed(r * theta.cos()), seed(r * theta.sin()));
    if s.is_zero() {
        s = GaussRat::one();
    }
    let norm = x.norm_sq();
    loop {
        // Newton step s <- (s + x / s) / 2, rounded to keep denominators bounded
        let next = &(&s + &(x / &s)) * &GaussRat::real(Rat::new(1.into(), 2.into()));
        s = GaussRat::new(round(&next.re), round(&next.im));
        let e = &(&s * &s) - x;
        // |s - root| <= |s² - x| / |root| for the nearer root
        let bound = e.norm_sq() / &norm;
        if &bound <= tol_sq {
            return (s, bound);
        }
    }
}

/// Solves `c x² + (d - a) x - b = 0` and picks the attracting root.
pub fn fixed_points_multiplier(m: &MoebiusMap) -> Result<FixedPoints> {
    if !m.is_loxodromic() {
        return Err(Error::NotLoxodromic(format!("tr²/det = {}", m.trace_invariant())));
    }
    if m.c.is_zero() {
        // one fixed point at infinity
        return Err(Error::NotLoxodromic("a fixed point lies at infinity".into()));
    }
    let t = m.trace();
    let disc = &(&t * &t) - &(&GaussRat::int(4) * &m.det());
    let (root, err) = sqrt_approx(&disc, &default_tol_sq());
    let two_c = &GaussRat::int(2) * &m.c;
    let amd = &m.a - &m.d;
    let x1 = &(&amd + &root) / &two_c;
    let x2 = &(&amd - &root) / &two_c;
    let d1 = m.derivative(&x1)?;
    let d2 = m.derivative(&x2)?;
    let (att, rep, mu) = if d1.norm_sq() < d2.norm_sq() { (x1, x2, d1) } else { (x2, x1, d2) };
    if !(mu.norm_sq() < Rat::one()) {
        return Err(Error::NotLoxodromic("no attracting fixed point".into()));
    }
    let exact = err.is_zero();
    let error_sq_bound = if exact { Rat::zero() } else { err / two_c.norm_sq() };
    Ok(FixedPoints { attracting: att, repelling: rep, multiplier: mu, exact, error_sq_bound })
}

/// `w = (W - μZ)/(1 - μ)`, `z = (Z - μW)/(1 - μ)`, `q = -μ (W - Z)² / (1 - μ)²`.
pub fn to_wzq(big_w: &GaussRat, big_z: &GaussRat, mu: &GaussRat) -> Result<(GaussRat, GaussRat, GaussRat)> {
    if mu.is_zero() {
        return Err(Error::Degenerate("μ = 0".into()));
    }
    if *mu == GaussRat::one() {
        return Err(Error::NotLoxodromic("μ = 1 is parabolic".into()));
    }
    if !(mu.norm_sq() < Rat::one()) {
        return Err(Error::NotLoxodromic(format!("|μ| >= 1 for μ = {mu}")));
    }
    if big_w == big_z {
        return Err(Error::Degenerate("W = Z".into()));
    }
    let one_minus = &GaussRat::one() - mu;
    let w = &(big_w - &(mu * big_z)) / &one_minus;
    let z = &(big_z - &(mu * big_w)) / &one_minus;
    let diff = big_w - big_z;
    let q = -&(&(mu * &(&diff * &diff)) / &(&one_minus * &one_minus));
    Ok((w, z, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat::rat;

    fn g(n: i64) -> GaussRat {
        GaussRat::int(n)
    }

    #[test]
    fn example_generator() {
        let m = from_wzq(&g(4), &g(-2), &g(-8)).unwrap();
        assert_eq!(m.apply(&Point::Infinity), Point::Finite(g(4)));
        assert_eq!(m.inverse().apply(&Point::Infinity), Point::Finite(g(-2)));
        assert_ne!(m.apply(&Point::Finite(g(4))), Point::Finite(g(4)));
        assert!(m.compose(&m.inverse()).is_identity());
        let f = fixed_points_multiplier(&m).unwrap();
        assert!(f.exact);
        assert_eq!(f.attracting, g(2));
        assert_eq!(f.repelling, g(0));
        assert_eq!(f.multiplier, GaussRat::real(rat(1, 2)));
        assert_eq!(to_wzq(&g(2), &g(0), &GaussRat::real(rat(1, 2))).unwrap(), (g(4), g(-2), g(-8)));
    }

    #[test]
    fn inverse_swaps_fixed_points() {
        let m = from_wzq(&g(4), &g(-2), &g(-8)).unwrap();
        let inv = m.inverse();
        let f = fixed_points_multiplier(&inv).unwrap();
        assert_eq!(f.attracting, g(0));
        assert_eq!(f.repelling, g(2));
        // derivative at the other fixed point is 1/μ of the original
        assert_eq!(inv.derivative(&g(2)).unwrap(), g(2));
        assert_eq!(to_wzq(&g(0), &g(2), &GaussRat::real(rat(1, 2))).unwrap(), (g(-2), g(4), g(-8)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(from_wzq(&g(1), &g(0), &g(0)).is_err());
        assert!(matches!(fixed_points_multiplier(&MoebiusMap::identity()), Err(Error::NotLoxodromic(_))));
        // x -> -1/x is elliptic
        let ell = MoebiusMap::new(g(0), g(-1), g(1), g(0)).unwrap();
        assert!(!ell.is_loxodromic());
        assert!(to_wzq(&g(1), &g(0), &g(1)).is_err());
        assert!(to_wzq(&g(1), &g(0), &g(2)).is_err());
        assert!(to_wzq(&g(1), &g(1), &GaussRat::real(rat(1, 2))).is_err());
    }

    #[test]
    fn irrational_fixed_points() {
        // x -> 3 + 1/x: fixed points (3 ± √13)/2
        let m = from_wzq(&g(3), &g(0), &g(1)).unwrap();
        let f = fixed_points_multiplier(&m).unwrap();
        assert!(!f.exact);
        assert!(f.error_sq_bound <= default_tol_sq());
        let (w, z, q) = to_wzq(&f.attracting, &f.repelling, &f.multiplier).unwrap();
        let close = |a: &GaussRat, b: &GaussRat| (a - b).norm_sq() < Rat::new(1.into(), num_bigint::BigInt::from(10).pow(40));
        assert!(close(&w, &g(3)) && close(&z, &g(0)) && close(&q, &g(1)));
    }

    #[test]
    fn small_multiplier_degenerates_to_node() {
        let mu = GaussRat::real(Rat::new(1.into(), 1_000_000.into()));
        let (w, z, q) = to_wzq(&g(2), &g(0), &mu).unwrap();
        let eps = Rat::new(1.into(), 100_000.into());
        assert!((&w - &g(2)).norm_sq() < &eps * &eps);
        assert!((&z - &g(0)).norm_sq() < &eps * &eps);
        // leading order q ≈ -μ (W - Z)²
        let lead = -&(&mu * &g(4));
        assert!((&q - &lead).norm_sq() < (&mu * &mu).norm_sq() * int(100));
    }
}
