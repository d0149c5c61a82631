//! Casimir elements `C_{k,j}` and Casimir endomorphisms `C_k(m, n)`.

use num_traits::Zero;

use crate::fock::GradedSpace;
use crate::lattice::{graded_mode, LatticeVector, LatticeVoa};
use crate::series::Rat;

/// `C_{k,j} = Σ_i (v_i)_j v^i`, homogeneous of weight `k - j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CasimirElement {
    pub k: u32,
    pub j: i64,
    pub vector: LatticeVector,
}

impl CasimirElement {
    pub fn weight(&self) -> i64 {
        self.k as i64 - self.j
    }
}

/// Basis of `V_k` paired with its dual basis.
pub fn dual_pairs(voa: &LatticeVoa, k: u32) -> Vec<(LatticeVector, LatticeVector)> {
    voa.basis_shared(k).iter().map(|s| (LatticeVector::basis(s.clone()), voa.dual(s))).collect()
}

pub fn casimir_element(voa: &LatticeVoa, k: u32, j: i64) -> CasimirElement {
    let mut vector = LatticeVector::zero();
    if j <= k as i64 {
        for (v, d) in dual_pairs(voa, k) {
            vector = vector.add(&graded_mode(voa, &v, j, &d));
        }
    }
    CasimirElement { k, j, vector }
}

/// `C_k(m, n) x = Σ_i (v_i)_m (v^i)_n x`.
pub fn casimir_endo(voa: &LatticeVoa, k: u32, m: i64, n: i64, x: &LatticeVector) -> LatticeVector {
    casimir_endo_with(voa, &dual_pairs(voa, k), m, n, x)
}

pub fn casimir_endo_with(
    voa: &LatticeVoa,
    pairs: &[(LatticeVector, LatticeVector)],
    m: i64,
    n: i64,
    x: &LatticeVector,
) -> LatticeVector {
    let mut out = LatticeVector::zero();
    for (v, d) in pairs {
        let y = graded_mode(voa, d, n, x);
        if y.is_zero() {
            continue;
        }
        let z = graded_mode(voa, v, m, &y);
        out = out.add(&z);
    }
    out
}

/// `(Ω | C_{k_1}(m_1, n_1) ... C_{k_s}(m_s, n_s) Ω)`; the last factor acts first.
pub fn casimir_endo_vacuum(voa: &LatticeVoa, ops: &[(u32, i64, i64)]) -> Rat {
    let vac = voa.vacuum();
    let mut x = LatticeVector::basis(vac.clone());
    for &(k, m, n) in ops.iter().rev() {
        x = casimir_endo(voa, k, m, n, &x);
        if x.is_zero() {
            return Rat::zero();
        }
    }
    x.coeff(&vac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::PointConfig;
    use crate::fock::FockState;
    use crate::lattice::conformal_vector;
    use crate::partition::{casimir_pair_correlator, ModelEngine, VOAModel};
    use crate::series::rat::{int, pow_i};
    use num_traits::One;

    #[test]
    fn small_casimir_elements() {
        let voa = LatticeVoa::heisenberg(1);
        let c00 = casimir_element(&voa, 0, 0);
        assert_eq!(c00.vector, LatticeVector::basis(voa.vacuum()));
        assert!(casimir_element(&voa, 0, 1).vector.is_zero());
        let c = casimir_element(&voa, 1, -1);
        assert_eq!(c.weight(), 2);
        assert_eq!(c.vector, conformal_vector(&voa).scale(&int(-2)));
        for k in 0..=3 {
            assert!(casimir_element(&voa, k, k as i64 + 1).vector.is_zero());
            for j in -2..=k as i64 {
                let c = casimir_element(&voa, k, j);
                for (s, _) in c.vector.iter() {
                    assert_eq!(voa.state_weight(s) as i64, c.weight());
                }
            }
        }
    }

    #[test]
    fn vacuum_moments() {
        let voa = LatticeVoa::heisenberg(1);
        assert!(casimir_endo_vacuum(&voa, &[]).is_one());
        assert!(casimir_endo_vacuum(&voa, &[(1, 2, -1)]).is_zero());
        for m in 1..=5 {
            assert_eq!(casimir_endo_vacuum(&voa, &[(1, m, -m)]), int(-m));
        }
        // Σ_{m>=1} -m z^{m-1} w^{-m-1} = -(w - z)^{-2} reproduces the q^1 coefficient
        let e = ModelEngine::new(&VOAModel::Heisenberg(1));
        for name in ["g1a", "g1b"] {
            let pts = PointConfig::builtin(name).unwrap();
            let closed = -pow_i(&(pts.w(0) - pts.z(0)), -2).unwrap();
            assert_eq!(casimir_pair_correlator(&e, &[1], &pts).unwrap(), closed);
        }
    }

    #[test]
    fn endomorphism_on_states() {
        let voa = LatticeVoa::heisenberg(1);
        let h = LatticeVector::basis(voa.neutral(FockState::new(1, vec![(0, 1)])));
        // C_1(-1, 1) h = -h_{-1} h_1 h = -h
        assert_eq!(casimir_endo(&voa, 1, -1, 1, &h), h.scale(&int(-1)));
    }
}
