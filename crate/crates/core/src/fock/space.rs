//! Graded state spaces with an invariant bilinear form and Virasoro action.

use std::fmt::Debug;

use num_traits::{One, Zero};

use super::state::LinComb;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::series::Rat;

/// A graded vertex-algebra state space with a monomial basis.
pub trait GradedSpace: Sync {
    type State: Ord + Clone + Debug + Send + Sync;

    fn central_charge(&self) -> Rat;

    /// Monomial basis of the weight-`k` subspace, in canonical order.
    fn basis(&self, k: u32) -> Vec<Self::State>;

    fn dim(&self, k: u32) -> usize {
        self.basis(k).len()
    }

    fn weight(&self, s: &Self::State) -> u32;

    /// Invariant bilinear form on basis states, normalised by `(Ω, Ω) = 1`.
    fn bilinear(&self, a: &Self::State, b: &Self::State) -> Rat;

    /// Dual of a basis state with respect to [`GradedSpace::bilinear`].
    fn dual(&self, s: &Self::State) -> LinComb<Self::State>;

    /// `L_m` on a vector.
    fn virasoro(&self, m: i64, v: &LinComb<Self::State>) -> LinComb<Self::State>;

    fn vacuum(&self) -> Self::State;

    fn bilinear_vec(&self, u: &LinComb<Self::State>, v: &LinComb<Self::State>) -> Rat {
        let mut acc = Rat::zero();
        for (a, ca) in u.iter() {
            for (b, cb) in v.iter() {
                let f = self.bilinear(a, b);
                if !f.is_zero() {
                    acc += f * ca * cb;
                }
            }
        }
        acc
    }

    fn gram(&self, k: u32) -> Matrix {
        let b = self.basis(k);
        let rows = b.iter().map(|x| b.iter().map(|y| self.bilinear(x, y)).collect()).collect();
        Matrix::from_rows(rows)
    }
}

/// A subspace basis together with its dual set under the bilinear form.
#[derive(Clone, Debug)]
pub struct DualPairing<S: Ord> {
    pub weight: u32,
    pub basis: Vec<LinComb<S>>,
    pub dual: Vec<LinComb<S>>,
}

impl<S: Ord + Clone> DualPairing<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Dual set of an arbitrary basis of a subspace on which the form is nondegenerate.
pub fn dual_of_subspace<G: GradedSpace>(
    space: &G,
    weight: u32,
    basis: Vec<LinComb<G::State>>,
) -> Result<DualPairing<G::State>> {
    let n = basis.len();
    let gram = Matrix::from_rows(
        basis
            .iter()
            .map(|x| basis.iter().map(|y| space.bilinear_vec(x, y)).collect())
            .collect(),
    );
    let inv = gram
        .inverse()
        .ok_or_else(|| Error::Invariant(format!("degenerate bilinear form on a weight-{weight} subspace")))?;
    let dual = (0..n)
        .map(|j| {
            let mut v = LinComb::zero();
            for (i, b) in basis.iter().enumerate() {
                if !inv[(i, j)].is_zero() {
                    v.add_scaled(b, &inv[(i, j)]);
                }
            }
            v
        })
        .collect();
    Ok(DualPairing { weight, basis, dual })
}

/// Basis of the quasi-primary subspace `ker(L_1) ∩ V_k`, with its dual set.
pub fn quasi_primary<G: GradedSpace>(space: &G, k: u32) -> Result<DualPairing<G::State>> {
    let top = space.basis(k);
    let kernel: Vec<LinComb<G::State>> = if k == 0 {
        vec![LinComb::basis(space.vacuum())]
    } else {
        let bottom = space.basis(k - 1);
        let mut m = Matrix::zeros(bottom.len(), top.len());
        for (j, s) in top.iter().enumerate() {
            let image = space.virasoro(1, &LinComb::basis(s.clone()));
            for (i, t) in bottom.iter().enumerate() {
                m[(i, j)] = image.coeff(t);
            }
        }
        m.nullspace().into_iter().map(|c| LinComb::from_coords(&top, &c)).collect()
    };
    dual_of_subspace(space, k, kernel)
}

/// Checks `(v_i, v^j) = δ_ij` on the monomial basis of weight `k`.
pub fn check_monomial_duals<G: GradedSpace>(space: &G, k: u32) -> Result<()> {
    let basis = space.basis(k);
    for (i, a) in basis.iter().enumerate() {
        let d = space.dual(a);
        for (j, b) in basis.iter().enumerate() {
            let v = space.bilinear_vec(&LinComb::basis(b.clone()), &d);
            let expected = if i == j { Rat::one() } else { Rat::zero() };
            if v != expected {
                return Err(Error::Invariant(format!("dual basis mismatch at weight {k}: ({b:?}, dual {a:?}) = {v}")));
            }
        }
    }
    Ok(())
}
