//! Mode-expansion oracle and the two-point convention check.
//!
//! The oracle never touches the Wick engine. Using translation covariance,
//! `⟨Y(a,z1) Y(b,z2) Y(c,z3)⟩ = ⟨Ω, Y(a,x) Y(b,y) c⟩` with `x = z1 - z3`,
//! `y = z2 - z3`, and the right side is the double mode sum
//! `Σ ⟨Ω, a_(m) b_(n) c⟩ x^{-m-1} y^{-n-1}`. By weight counting only one
//! `m` survives for each `n`, so this is `x^{-wa} y^{-wb-wc} C(y/x)` for a
//! power series `C`. Locality bounds the pole at `u = 1` by `P = wa + wb` and
//! the growth at infinity, so `(1-u)^P C(u)` is a polynomial of degree at
//! most `P + wc`. Extra series terms past that degree are computed and must
//! vanish: that is the certificate.

use num_traits::{One, Signed, Zero};

use super::wick::{wick_correlator, Insertion};
use crate::error::{Error, Result};
use crate::fock::GradedSpace;
use crate::lattice::{vertex_mode, LatticeVOAState, LatticeVector, LatticeVoa};
use crate::series::rat::{big, binomial, display, pow_i, sign};
use crate::series::Rat;

/// Oracle result: the exact value and whether the series truncation was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleValue {
    pub value: Rat,
    pub certified: bool,
}

fn vacuum_coefficient(voa: &LatticeVoa, v: &LatticeVector) -> Rat {
    v.coeff(&voa.vacuum())
}

fn homogeneous_weight(voa: &LatticeVoa, v: &LatticeVector) -> Result<u32> {
    let mut w = None;
    for (s, _) in v.iter() {
        let ws = voa.state_weight(s);
        match w {
            None => w = Some(ws),
            Some(x) if x != ws => return Err(Error::Invalid("oracle insertions must be homogeneous".into())),
            _ => {}
        }
    }
    Ok(w.unwrap_or(0))
}

fn mode_vec(voa: &LatticeVoa, a: &LatticeVector, m: i64, b: &LatticeVector) -> LatticeVector {
    let mut out = LatticeVector::zero();
    for (s, cs) in a.iter() {
        for (t, ct) in b.iter() {
            out.add_scaled(&vertex_mode(voa, s, m, t), &(cs * ct));
        }
    }
    out
}

/// Vacuum correlator of up to three insertions by direct mode summation.
///
/// `extra` is the number of series terms computed beyond the locality bound
/// and checked to vanish.
pub fn mode_oracle(voa: &LatticeVoa, insertions: &[Insertion], extra: u32) -> Result<OracleValue> {
    let pts: Vec<&Rat> = insertions.iter().map(|i| &i.point).collect();
    for k in 1..pts.len() {
        if pts[k - 1].abs() <= pts[k].abs() {
            return Err(Error::Domain(format!(
                "mode expansion needs |z_{}| > |z_{}|, got {} and {}",
                k,
                k + 1,
                display(pts[k - 1]),
                display(pts[k])
            )));
        }
    }
    match insertions.len() {
        0 => Ok(OracleValue { value: Rat::one(), certified: true }),
        1 => Ok(OracleValue { value: vacuum_coefficient(voa, &insertions[0].state), certified: true }),
        2 => {
            let (a, b) = (&insertions[0].state, &insertions[1].state);
            if a.is_zero() || b.is_zero() {
                return Ok(OracleValue { value: Rat::zero(), certified: true });
            }
            let wa = homogeneous_weight(voa, a)? as i64;
            let wb = homogeneous_weight(voa, b)? as i64;
            let x = pts[0] - pts[1];
            let m = wa + wb - 1;
            let c = vacuum_coefficient(voa, &mode_vec(voa, a, m, b));
            Ok(OracleValue { value: c * pow_i(&x, -m - 1)?, certified: true })
        }
        3 => three_point(voa, insertions, extra),
        n => Err(Error::Invalid(format!("mode oracle supports at most 3 insertions, got {n}"))),
    }
}

fn three_point(voa: &LatticeVoa, ins: &[Insertion], extra: u32) -> Result<OracleValue> {
    let (a, b, c) = (&ins[0].state, &ins[1].state, &ins[2].state);
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Ok(OracleValue { value: Rat::zero(), certified: true });
    }
    let wa = homogeneous_weight(voa, a)? as i64;
    let wb = homogeneous_weight(voa, b)? as i64;
    let wc = homogeneous_weight(voa, c)? as i64;
    let x = &ins[0].point - &ins[2].point;
    let y = &ins[1].point - &ins[2].point;
    if x.is_zero() || y.is_zero() || x == y {
        return Err(Error::Pole("coincident insertion points".into()));
    }
    let p = wa + wb;
    let degree = p + wc;
    let terms = degree + extra as i64;
    // C(u) coefficients: k = weight of b_(n) c
    let mut series = Vec::with_capacity(terms as usize + 1);
    for k in 0..=terms {
        let n = wb + wc - 1 - k;
        let d = mode_vec(voa, b, n, c);
        let m = wa + k - 1;
        series.push(vacuum_coefficient(voa, &mode_vec(voa, a, m, &d)));
    }
    // multiply by (1 - u)^P
    let mut poly = vec![Rat::zero(); series.len()];
    for (i, s) in series.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        for j in 0..=(p as usize).min(series.len() - 1 - i) {
            poly[i + j] += s * sign(j as i64) * big(&binomial(p as u64, j as u64));
        }
    }
    let certified = poly[(degree as usize + 1)..].iter().all(Zero::is_zero);
    let u = &y / &x;
    let mut q = Rat::zero();
    for coeff in poly[..=degree as usize].iter().rev() {
        q = q * &u + coeff;
    }
    let value = q * pow_i(&(Rat::one() - &u), -p)? * pow_i(&x, -wa)? * pow_i(&y, -wb - wc)?;
    Ok(OracleValue { value, certified })
}

/// `(Ω, Y(u,w) Y(v,z) Ω)` for quasi-primary `u, v` of weight `k`, checked
/// against `(-1)^k (u, v) (w - z)^{-2k}`.
pub fn two_point_check(voa: &LatticeVoa, u: &LatticeVector, v: &LatticeVector, w: &Rat, z: &Rat) -> Result<Rat> {
    let k = homogeneous_weight(voa, u)?;
    if homogeneous_weight(voa, v)? != k {
        return Err(Error::Invalid("two-point check needs equal weights".into()));
    }
    if !voa.virasoro(1, u).is_zero() || !voa.virasoro(1, v).is_zero() {
        return Err(Error::Invalid("two-point check needs quasi-primary vectors".into()));
    }
    let value = wick_correlator(voa, &[Insertion::new(u.clone(), w.clone()), Insertion::new(v.clone(), z.clone())])?;
    let expected = sign(k as i64) * voa.bilinear_vec(u, v) * pow_i(&(w - z), -2 * k as i64)?;
    if value != expected {
        return Err(Error::Invariant(format!(
            "two-point function {} differs from (-1)^k (u,v)(w-z)^(-2k) = {}",
            display(&value),
            display(&expected)
        )));
    }
    Ok(value)
}

/// Convenience for basis-state insertions.
pub fn monomial_insertions(states: &[LatticeVOAState], points: &[Rat]) -> Vec<Insertion> {
    states.iter().zip(points).map(|(s, p)| Insertion::monomial(s.clone(), p.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::wick::wick_monomials;
    use crate::fock::FockState;
    use crate::lattice::{conformal_vector, EvenLattice};
    use crate::series::rat::{int, rat};

    #[test]
    fn two_point_examples() {
        let voa = LatticeVoa::heisenberg(1);
        let h = voa.neutral(FockState::new(1, vec![(0, 1)]));
        let r = mode_oracle(&voa, &monomial_insertions(&[h.clone(), h.clone()], &[int(3), int(1)]), 2).unwrap();
        assert_eq!(r.value, rat(1, 4));
        let r = mode_oracle(&voa, &monomial_insertions(std::slice::from_ref(&h), &[int(3)]), 2).unwrap();
        assert!(r.value.is_zero());
        assert!(mode_oracle(&voa, &monomial_insertions(&[h.clone(), h], &[int(1), int(3)]), 2).is_err());
    }

    #[test]
    fn three_point_h_h_nu() {
        let voa = LatticeVoa::heisenberg(1);
        let h = LatticeVector::basis(voa.neutral(FockState::new(1, vec![(0, 1)])));
        let nu = conformal_vector(&voa);
        let ins = vec![
            Insertion::new(h.clone(), int(7)),
            Insertion::new(h.clone(), int(3)),
            Insertion::new(nu.clone(), int(1)),
        ];
        let oracle = mode_oracle(&voa, &ins, 3).unwrap();
        assert!(oracle.certified);
        assert_eq!(oracle.value, wick_correlator(&voa, &ins).unwrap());
        // <h(x) h(y) T(z)> = (x-z)^{-2} (y-z)^{-2}
        assert_eq!(oracle.value, rat(1, 36 * 4));
    }

    #[test]
    fn lattice_three_point() {
        let voa = LatticeVoa::new(EvenLattice::fixture("A1").unwrap());
        let e = voa.vacuum().with_charge(vec![1]);
        let f = voa.vacuum().with_charge(vec![-1]);
        let h = voa.neutral(FockState::new(1, vec![(0, 1)]));
        let pts = [int(7), int(3), int(1)];
        for states in [[e.clone(), f.clone(), h.clone()], [h.clone(), e.clone(), f.clone()], [e.clone(), h.clone(), f.clone()]] {
            let ins = monomial_insertions(&states, &pts);
            let oracle = mode_oracle(&voa, &ins, 2).unwrap();
            assert!(oracle.certified);
            let refs: Vec<&LatticeVOAState> = states.iter().collect();
            assert_eq!(oracle.value, wick_monomials(&voa, &refs, &pts).unwrap());
        }
    }

    #[test]
    fn two_point_convention() {
        let voa = LatticeVoa::heisenberg(2);
        let nu = conformal_vector(&voa);
        let v = two_point_check(&voa, &nu, &nu, &int(3), &int(1)).unwrap();
        // (ν, ν) = c/2 = 1
        assert_eq!(v, rat(1, 16));
        let h = LatticeVector::basis(voa.neutral(FockState::new(2, vec![(0, 1)])));
        assert_eq!(two_point_check(&voa, &h, &h, &int(3), &int(1)).unwrap(), rat(1, 4));
        let g = LatticeVector::basis(voa.neutral(FockState::new(2, vec![(1, 1)])));
        assert!(two_point_check(&voa, &h, &g, &int(3), &int(1)).unwrap().is_zero());
    }
}
