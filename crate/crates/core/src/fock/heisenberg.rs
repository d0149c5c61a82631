//! The rank-`r` Heisenberg vertex algebra `M_r(1)` on its Fock space.
//!
//! Sign conventions: the PCT operator acts by `θh = -h` on the weight-one
//! generators, so moving `h_{-n}` across the invariant bilinear form costs a
//! sign, `(h_{-n} b, c) = -(b, h_n c)`. The scalar product has `h_n` adjoint to
//! `h_{-n}`. Together these give `(u, v) = (-1)^{#modes(u)} <u|v>` on monomials.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;

use super::modes;
use super::space::{quasi_primary, DualPairing, GradedSpace};
use super::state::{FockState, GradedVector, LinComb};
use crate::error::Result;
use crate::series::rat::{factorial, int, sign};
use crate::series::Rat;

type BasisCache = RwLock<HashMap<(usize, u32), Arc<Vec<FockState>>>>;

fn cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Monomial basis of the weight-`k` subspace of the rank-`r` Fock space.
pub fn basis(rank: usize, k: u32) -> Vec<FockState> {
    basis_shared(rank, k).as_ref().clone()
}

pub fn basis_shared(rank: usize, k: u32) -> Arc<Vec<FockState>> {
    if let Some(b) = cache().read().get(&(rank, k)) {
        return b.clone();
    }
    let mut out = Vec::new();
    let types: Vec<(u16, u32)> = (1..=k).flat_map(|n| (0..rank as u16).map(move |c| (c, n))).collect();
    let mut cur = Vec::new();
    fill(&types, 0, k, &mut cur, &mut out, rank);
    out.sort();
    let out = Arc::new(out);
    cache().write().insert((rank, k), out.clone());
    out
}

fn fill(types: &[(u16, u32)], i: usize, remaining: u32, cur: &mut Vec<(u16, u32)>, out: &mut Vec<FockState>, rank: usize) {
    if remaining == 0 {
        out.push(FockState::new(rank, cur.clone()));
        return;
    }
    if i == types.len() {
        return;
    }
    let (c, n) = types[i];
    if n > remaining {
        return;
    }
    let base = cur.len();
    let mut m = 0;
    loop {
        fill(types, i + 1, remaining - m * n, cur, out, rank);
        if (m + 1) * n > remaining {
            break;
        }
        m += 1;
        cur.push((c, n));
    }
    cur.truncate(base);
}

/// `<u|v>` with `h_n` adjoint to `h_{-n}` and metric entries `d_c`:
/// zero unless `u = v`, else `Π (d_c n)^m m!` over distinct factors.
pub fn norm_with_metric(u: &FockState, metric: &[Rat]) -> Rat {
    let mut acc = Rat::one();
    for ((c, n), m) in u.grouped() {
        let base = int(n as i64) * &metric[c as usize];
        acc *= num_traits::pow(base, m) * Rat::from_integer(factorial(m as u64));
    }
    acc
}

pub fn scalar_product(u: &FockState, v: &FockState) -> Rat {
    if u != v {
        return Rat::zero();
    }
    norm_with_metric(u, &vec![int(1); u.rank()])
}

/// `(u, v) = (-1)^{#modes(u)} <u|v>`.
pub fn bilinear_form(u: &FockState, v: &FockState) -> Rat {
    sign(u.num_modes() as i64) * scalar_product(u, v)
}

/// Duals `v^i = v_i / (v_i, v_i)` of the monomial basis of weight `k`.
pub fn dual_basis(rank: usize, k: u32) -> Vec<GradedVector> {
    basis(rank, k)
        .into_iter()
        .map(|s| {
            let f = bilinear_form(&s, &s);
            LinComb::term(s, f.recip())
        })
        .collect()
}

/// `h^(c)_n v` for zero-based color `c`.
pub fn heis_mode_apply(color: u16, n: i64, v: &GradedVector) -> GradedVector {
    let rank = v.iter().next().map_or(color as usize + 1, |(s, _)| s.rank());
    modes::apply_mode(v, color, n, &vec![int(1); rank], &Rat::zero())
}

/// Virasoro mode `L_m` for the standard conformal vector `ν = ½ Σ_c h^(c)_{-1} h^(c)_{-1} Ω`.
pub fn virasoro_mode(m: i64, v: &GradedVector) -> GradedVector {
    let Some((s, _)) = v.iter().next() else {
        return LinComb::zero();
    };
    let r = s.rank();
    modes::virasoro(m, v, &vec![int(1); r], &vec![Rat::zero(); r])
}

pub fn qp_subspace(rank: usize, k: u32) -> Result<DualPairing<FockState>> {
    quasi_primary(&Heisenberg::new(rank), k)
}

/// Number of `r`-colored partitions of `n` for `n <= max`, from the Euler product.
pub fn colored_partition_numbers(rank: usize, max: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); max + 1];
    p[0] = BigInt::one();
    for _ in 0..rank {
        for part in 1..=max {
            for n in part..=max {
                let add = p[n - part].clone();
                p[n] += add;
            }
        }
    }
    p
}

/// `M_r(1)` as a [`GradedSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heisenberg {
    rank: usize,
}

impl Heisenberg {
    pub fn new(rank: usize) -> Self {
        assert!(rank >= 1, "Heisenberg rank must be positive");
        Heisenberg { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The conformal vector.
    pub fn conformal_vector(&self) -> GradedVector {
        let mut v = LinComb::zero();
        for c in 0..self.rank as u16 {
            v.add_term(FockState::new(self.rank, vec![(c, 1), (c, 1)]), Rat::new(1.into(), 2.into()));
        }
        v
    }
}

impl GradedSpace for Heisenberg {
    type State = FockState;

    fn central_charge(&self) -> Rat {
        int(self.rank as i64)
    }

    fn basis(&self, k: u32) -> Vec<FockState> {
        basis(self.rank, k)
    }

    fn weight(&self, s: &FockState) -> u32 {
        s.weight()
    }

    fn bilinear(&self, a: &FockState, b: &FockState) -> Rat {
        bilinear_form(a, b)
    }

    fn dual(&self, s: &FockState) -> LinComb<FockState> {
        LinComb::term(s.clone(), bilinear_form(s, s).recip())
    }

    fn virasoro(&self, m: i64, v: &LinComb<FockState>) -> LinComb<FockState> {
        modes::virasoro(m, v, &vec![int(1); self.rank], &vec![Rat::zero(); self.rank])
    }

    fn vacuum(&self) -> FockState {
        FockState::vacuum(self.rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::space::check_monomial_duals;
    use crate::series::rat::rat;

    fn st(rank: usize, modes: &[(u16, u32)]) -> FockState {
        FockState::new(rank, modes.to_vec())
    }

    fn v(s: FockState) -> GradedVector {
        LinComb::basis(s)
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis(1, 0), vec![FockState::vacuum(1)]);
        let b = basis(1, 2);
        assert_eq!(b.len(), 2);
        assert!(b.contains(&st(1, &[(0, 2)])) && b.contains(&st(1, &[(0, 1), (0, 1)])));
        assert_eq!(basis(2, 2).len(), 5);
    }

    #[test]
    fn dims_are_colored_partitions() {
        for r in 1..=3 {
            let p = colored_partition_numbers(r, 10);
            for k in 0..=10u32 {
                assert_eq!(BigInt::from(basis(r, k).len()), p[k as usize], "r={r} k={k}");
            }
        }
    }

    #[test]
    fn scalar_products() {
        let vac = FockState::vacuum(1);
        assert_eq!(scalar_product(&vac, &vac), int(1));
        assert_eq!(scalar_product(&st(1, &[(0, 2)]), &st(1, &[(0, 2)])), int(2));
        assert_eq!(scalar_product(&st(1, &[(0, 1), (0, 1)]), &st(1, &[(0, 1), (0, 1)])), int(2));
        assert_eq!(scalar_product(&st(1, &[(0, 2)]), &st(1, &[(0, 1), (0, 1)])), int(0));
    }

    #[test]
    fn bilinear_signs() {
        let vac = FockState::vacuum(1);
        assert_eq!(bilinear_form(&vac, &vac), int(1));
        assert_eq!(bilinear_form(&st(1, &[(0, 1)]), &st(1, &[(0, 1)])), int(-1));
        assert_eq!(bilinear_form(&st(1, &[(0, 1), (0, 1)]), &st(1, &[(0, 1), (0, 1)])), int(2));
    }

    #[test]
    fn bilinear_matches_mode_moving_rule() {
        // (h_{-n} b, c) = -(b, h_n c) on random-ish small states
        let h = Heisenberg::new(2);
        for k in 0..=3u32 {
            for b in basis(2, k) {
                for n in 1..=3u32 {
                    for c in basis(2, k + n) {
                        for color in 0..2u16 {
                            let left = heis_mode_apply(color, -(n as i64), &v(b.clone()));
                            let right = heis_mode_apply(color, n as i64, &v(c.clone()));
                            assert_eq!(
                                h.bilinear_vec(&left, &v(c.clone())),
                                -h.bilinear_vec(&v(b.clone()), &right)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn duals() {
        let d = dual_basis(1, 1);
        assert_eq!(d, vec![LinComb::term(st(1, &[(0, 1)]), int(-1))]);
        let d2 = dual_basis(1, 2);
        assert!(d2.contains(&LinComb::term(st(1, &[(0, 2)]), rat(-1, 2))));
        assert!(d2.contains(&LinComb::term(st(1, &[(0, 1), (0, 1)]), rat(1, 2))));
        assert_eq!(dual_basis(1, 0), vec![v(FockState::vacuum(1))]);
        for r in 1..=2 {
            for k in 0..=4 {
                check_monomial_duals(&Heisenberg::new(r), k).unwrap();
            }
        }
    }

    #[test]
    fn gram_is_symmetric_and_nondegenerate() {
        for r in 1..=2 {
            for k in 0..=5 {
                let g = Heisenberg::new(r).gram(k);
                assert!(g.is_symmetric());
                let diag: Rat = (0..g.rows()).map(|i| g[(i, i)].clone()).product();
                assert_eq!(g.determinant(), diag);
                assert!(!diag.is_zero());
            }
        }
    }

    #[test]
    fn mode_examples() {
        let h = v(st(1, &[(0, 1)]));
        assert_eq!(heis_mode_apply(0, 1, &h), v(FockState::vacuum(1)));
        for k in 0..=4 {
            for s in basis(1, k) {
                assert!(heis_mode_apply(0, 0, &v(s)).is_zero());
            }
        }
        let hh = heis_mode_apply(0, -1, &h);
        let hh_state = hh.iter().next().unwrap().0.clone();
        assert_eq!(scalar_product(&hh_state, &hh_state), int(2));
    }

    #[test]
    fn virasoro_examples() {
        for r in 1..=2 {
            for k in 0..=6 {
                for s in basis(r, k) {
                    assert_eq!(virasoro_mode(0, &v(s.clone())), v(s).scale(&int(k as i64)));
                }
            }
        }
        assert_eq!(virasoro_mode(1, &v(st(1, &[(0, 2)]))), LinComb::term(st(1, &[(0, 1)]), int(2)));
    }

    #[test]
    fn qp_examples() {
        assert_eq!(qp_subspace(1, 1).unwrap().dim(), 1);
        assert_eq!(qp_subspace(1, 2).unwrap().dim(), 1);
        assert_eq!(qp_subspace(1, 4).unwrap().dim(), 2);
        for r in 1..=2 {
            for k in 2..=6u32 {
                let qp = qp_subspace(r, k).unwrap();
                assert_eq!(qp.dim(), basis(r, k).len() - basis(r, k - 1).len(), "r={r} k={k}");
            }
        }
    }
}
