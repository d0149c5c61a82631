//! The parameter region `U_{g,r}`, the sewing relation and point-set certificates.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::gauss::GaussRat;
use super::moebius::{from_wzq, Point};
use crate::correlators::PointConfig;
use crate::error::{Error, Result};
use crate::series::rat::{display, int};
use crate::series::Rat;

/// Handle data `(w_i, z_i, q_i)` for each handle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchottkyGenerators {
    pub handles: Vec<(GaussRat, GaussRat, GaussRat)>,
}

impl SchottkyGenerators {
    pub fn new(handles: Vec<(GaussRat, GaussRat, GaussRat)>) -> Result<Self> {
        for (i, (w, z, q)) in handles.iter().enumerate() {
            if q.is_zero() {
                return Err(Error::Degenerate(format!("handle {i} has q = 0")));
            }
            if w == z {
                return Err(Error::Degenerate(format!("handle {i} has w = z")));
            }
        }
        Ok(SchottkyGenerators { handles })
    }

    /// A point configuration with the same `q` on every handle.
    pub fn from_points(points: &PointConfig, q: &Rat) -> Result<Self> {
        Self::new(
            (0..points.genus())
                .map(|i| (GaussRat::real(points.w(i).clone()), GaussRat::real(points.z(i).clone()), GaussRat::real(q.clone())))
                .collect(),
        )
    }

    pub fn genus(&self) -> usize {
        self.handles.len()
    }

    fn centers(&self) -> Vec<&GaussRat> {
        self.handles.iter().flat_map(|(w, z, _)| [w, z]).collect()
    }
}

/// `0 < |q_i| < r²` for all handles and `|x - y| > 2r` for all distinct centers.
pub fn in_u_gr(gens: &SchottkyGenerators, r: &Rat) -> Result<bool> {
    if r <= &Rat::zero() {
        return Err(Error::Invalid("radius must be positive".into()));
    }
    let r2 = r * r;
    if gens.handles.iter().any(|(_, _, q)| q.is_zero() || q.norm_sq() >= &r2 * &r2) {
        return Ok(false);
    }
    let c = gens.centers();
    let four_r2 = int(4) * &r2;
    for i in 0..c.len() {
        for j in 0..i {
            if (c[i] - c[j]).norm_sq() <= four_r2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `|w_1| > |z_1| > |w_2| > ... > |z_g|`.
pub fn u_plus_ordered(gens: &SchottkyGenerators) -> bool {
    let c = gens.centers();
    c.windows(2).all(|p| p[0].norm_sq() > p[1].norm_sq())
}

/// The disks of radius `√|q_i|` around `w_i` and `z_i` are pairwise disjoint.
pub fn disks_disjoint(gens: &SchottkyGenerators) -> bool {
    let disks: Vec<(&GaussRat, Rat)> =
        gens.handles.iter().flat_map(|(w, z, q)| [(w, q.norm_sq()), (z, q.norm_sq())]).collect();
    for i in 0..disks.len() {
        for j in 0..i {
            let d2 = (disks[i].0 - disks[j].0).norm_sq();
            if !sum_of_roots_below(&disks[i].1, &disks[j].1, &d2) {
                return false;
            }
        }
    }
    true
}

/// `a2^{1/4} + b2^{1/4} < √d2`, i.e. `a + b + 2√(ab) < d2` with `a = √a2`, `b = √b2`.
///
/// Exact when `a2` and `b2` are squares; otherwise decided with upper bounds
/// for `a` and `b`, so a `true` answer is always sound.
fn sum_of_roots_below(a2: &Rat, b2: &Rat, d2: &Rat) -> bool {
    let (_, a_hi) = sqrt_rat_bounds(a2);
    let (_, b_hi) = sqrt_rat_bounds(b2);
    let rest = d2 - &a_hi - &b_hi;
    rest > Rat::zero() && int(4) * &a_hi * &b_hi < &rest * &rest
}

/// `(lo, hi)` with `lo <= √x <= hi`, exact when `x` is a square.
fn sqrt_rat_bounds(x: &Rat) -> (Rat, Rat) {
    if let Some(s) = crate::series::rat::sqrt_exact(x) {
        return (s.clone(), s);
    }
    crate::series::rat::root_bounds(x, 2, &Rat::new(1.into(), num_bigint::BigInt::from(10).pow(30)))
}

/// `x = γ_i(y)` if and only if `(x - w_i)(y - z_i) = q_i`, checked on one sample.
///
/// At `y = ∞` the relation degenerates to `x = w_i`, and at `y = z_i` to `x = ∞`.
pub fn plumbing_check(gens: &SchottkyGenerators, handle: usize, y: &Point) -> Result<bool> {
    let (w, z, q) = gens.handles.get(handle).ok_or_else(|| Error::Invalid(format!("no handle {handle}")))?;
    let m = from_wzq(w, z, q)?;
    let x = m.apply(y);
    Ok(match (y, &x) {
        (Point::Infinity, Point::Finite(x)) => x == w,
        (Point::Finite(y), Point::Infinity) => y == z,
        (Point::Finite(y), Point::Finite(x)) => {
            let holds = &(x - w) * &(y - z) == *q;
            // the converse: any x' with (x' - w)(y - z) = q equals γ(y)
            let solved = w + &(q / &(y - z));
            holds && solved == *x
        }
        (Point::Infinity, Point::Infinity) => false,
    })
}

/// Certificate that a real point set lies in `U_{g,r}^+` for `|q_i| < r²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCertificate {
    /// `r` as an exact fraction string.
    pub r: String,
    /// Bound on `|q_i|`: `r²`.
    pub q_bound: String,
    pub ordered: bool,
}

/// Picks `r` as one third of the smallest center distance and verifies membership
/// at `q_i = r² / 2`.
pub fn certify_points(points: &PointConfig) -> Result<PointCertificate> {
    let mut min_d2: Option<Rat> = None;
    let pts = points.points();
    for i in 0..pts.len() {
        for j in 0..i {
            let d = &pts[i] - &pts[j];
            let d2 = &d * &d;
            if min_d2.as_ref().is_none_or(|m| &d2 < m) {
                min_d2 = Some(d2);
            }
        }
    }
    let min_d2 = min_d2.ok_or_else(|| Error::Invalid("need at least one handle".into()))?;
    let (lo, _) = sqrt_rat_bounds(&min_d2);
    let r = lo / int(3);
    let probe = &r * &r / int(2);
    let gens = SchottkyGenerators::from_points(points, &probe)?;
    if !in_u_gr(&gens, &r)? {
        return Err(Error::Invariant("point certificate failed".into()));
    }
    Ok(PointCertificate { r: display(&r), q_bound: display(&(&r * &r)), ordered: u_plus_ordered(&gens) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat::rat;

    fn g(n: i64) -> GaussRat {
        GaussRat::int(n)
    }

    #[test]
    fn region_examples() {
        let gens = SchottkyGenerators::new(vec![(g(3), g(1), GaussRat::real(rat(1, 100)))]).unwrap();
        assert!(in_u_gr(&gens, &rat(9, 10)).unwrap());
        let big_q = SchottkyGenerators::new(vec![(g(3), g(1), GaussRat::real(rat(81, 100)))]).unwrap();
        assert!(!in_u_gr(&big_q, &rat(9, 10)).unwrap());
        assert!(SchottkyGenerators::new(vec![(g(1), g(1), g(1))]).is_err());
        let clash = SchottkyGenerators::new(vec![(g(3), g(1), g(1)), (g(3), g(0), g(1))]).unwrap();
        assert!(!in_u_gr(&clash, &rat(1, 10)).unwrap());
        assert!(disks_disjoint(&gens));
    }

    #[test]
    fn plumbing_examples() {
        let gens = SchottkyGenerators::new(vec![(g(4), g(-2), g(-8))]).unwrap();
        assert!(plumbing_check(&gens, 0, &Point::Finite(g(0))).unwrap());
        assert!(plumbing_check(&gens, 0, &Point::Infinity).unwrap());
        assert!(plumbing_check(&gens, 0, &Point::Finite(g(-2))).unwrap());
        assert!(plumbing_check(&gens, 0, &Point::Finite(GaussRat::new(rat(1, 3), rat(-2, 7)))).unwrap());
    }

    #[test]
    fn builtin_points_are_certified() {
        for name in ["g1a", "g1b", "g2a", "g2b", "g3a"] {
            let pts = PointConfig::builtin(name).unwrap();
            let c = certify_points(&pts).unwrap();
            assert!(c.ordered, "{name}");
        }
    }
}
