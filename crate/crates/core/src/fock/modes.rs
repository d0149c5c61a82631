//! Heisenberg mode action on Fock monomials.
//!
//! The rank-`r` Heisenberg algebra here is spanned by `h^(c)_n` with
//! `[h^(a)_m, h^(b)_n] = m d_a δ_{ab} δ_{m,-n}` for a diagonal metric `d`.
//! The metric is all ones for `M_r(1)`; lattice sectors use an orthogonal
//! rational basis of the Cartan space, which gives other diagonal entries.
//! Zero modes act by a scalar (the charge pairing), zero on neutral Fock space.

use num_traits::Zero;

use super::state::{FockState, LinComb};
use crate::series::rat::int;
use crate::series::Rat;

/// `h^(c)_n` on one monomial for `n != 0`.
pub fn mode_on_monomial(s: &FockState, color: u16, n: i64, metric: &[Rat]) -> Option<(FockState, Rat)> {
    debug_assert!(n != 0);
    if n < 0 {
        return Some((s.with_created(color, (-n) as u32), int(1)));
    }
    let n = n as u32;
    let mult = s.multiplicity(color, n);
    if mult == 0 {
        return None;
    }
    let coeff = int(mult as i64 * n as i64) * &metric[color as usize];
    Some((s.without(color, n).expect("present"), coeff))
}

/// `h^(c)_n v`, where the zero mode acts as multiplication by `zero_mode`.
pub fn apply_mode(
    v: &LinComb<FockState>,
    color: u16,
    n: i64,
    metric: &[Rat],
    zero_mode: &Rat,
) -> LinComb<FockState> {
    if n == 0 {
        return v.scale(zero_mode);
    }
    let mut out = LinComb::zero();
    for (s, c) in v.iter() {
        if let Some((t, k)) = mode_on_monomial(s, color, n, metric) {
            out.add_term(t, k * c);
        }
    }
    out
}

/// `L_m = Σ_c (1 / 2d_c) Σ_j :h^(c)_j h^(c)_{m-j}:` with annihilators to the right.
pub fn virasoro(m: i64, v: &LinComb<FockState>, metric: &[Rat], zero_modes: &[Rat]) -> LinComb<FockState> {
    let mut out = LinComb::zero();
    for (s, coeff) in v.iter() {
        let w = s.weight() as i64;
        for color in 0..metric.len() as u16 {
            let half_inv = (int(2) * &metric[color as usize]).recip();
            let p = &zero_modes[color as usize];
            let lo = m - w;
            for j in lo..=w {
                let (a, b) = (j, m - j);
                let (left, right) = if a <= b { (a, b) } else { (b, a) };
                if (left == 0 || right == 0) && p.is_zero() {
                    continue;
                }
                let one = LinComb::term(s.clone(), coeff.clone());
                let step = apply_mode(&one, color, right, metric, p);
                if step.is_zero() {
                    continue;
                }
                let step = apply_mode(&step, color, left, metric, p);
                out.add_scaled(&step, &half_inv);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(r: usize) -> Vec<Rat> {
        vec![int(1); r]
    }

    #[test]
    fn commutator_on_vacuum() {
        let vac = LinComb::basis(FockState::vacuum(1));
        let h1 = apply_mode(&vac, 0, -1, &ones(1), &Rat::zero());
        let back = apply_mode(&h1, 0, 1, &ones(1), &Rat::zero());
        assert_eq!(back, vac);
        let h0 = apply_mode(&h1, 0, 0, &ones(1), &Rat::zero());
        assert!(h0.is_zero());
    }

    #[test]
    fn l_minus_one_on_h() {
        let h = LinComb::basis(FockState::new(1, vec![(0, 1)]));
        let l = virasoro(-1, &h, &ones(1), &[Rat::zero()]);
        assert_eq!(l, LinComb::basis(FockState::new(1, vec![(0, 2)])));
    }

    #[test]
    fn charged_l0() {
        // L_0 on a charged vacuum gives p^2 / 2d
        let vac = LinComb::basis(FockState::vacuum(1));
        let l0 = virasoro(0, &vac, &[int(2)], &[int(2)]);
        assert_eq!(l0, vac);
    }
}
