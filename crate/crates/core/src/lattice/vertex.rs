//! Vertex-operator modes `a_(m) b` on lattice (and plain Fock) states.
//!
//! For `a = h^(c1)_{-n1} ... h^(ck)_{-nk} e^α`,
//! `Y(a, x) = :F^(c1)_{n1}(x) ... F^(ck)_{nk}(x) E^-(-α, x) E^+(-α, x): e_α x^{α_0}`
//! with `F_n(x) = Σ_j C(-j-1, n-1) h_j x^{-j-n}` (the field of `h_{-n}Ω`).
//! Normal ordering puts every `h_j` with `j >= 0` to the right of `e_α`,
//! so zero modes read the charge of the input. The power of `x` in every
//! term is fixed by the weights, so it is never tracked: the result is the
//! sum of all terms landing in the right output weight.

use num_traits::Zero;

use super::voa::{LatticeVOAState, LatticeVector, LatticeVoa};
use crate::fock::modes::mode_on_monomial;
use crate::fock::{FockState, LinComb};
use crate::series::rat::{big, binomial_signed, factorial, int};
use crate::series::Rat;

type FockVec = LinComb<FockState>;

/// `exp(k h^(c)_n)` for `n > 0` on a Fock vector.
fn exp_annihilator(v: &FockVec, color: u16, n: u32, k: &Rat, metric: &[Rat]) -> FockVec {
    let mut out = v.clone();
    let mut term = v.clone();
    let mut j = 1i64;
    loop {
        let mut next = LinComb::zero();
        for (s, c) in term.iter() {
            if let Some((t, f)) = mode_on_monomial(s, color, n as i64, metric) {
                next.add_term(t, f * c * k / int(j));
            }
        }
        if next.is_zero() {
            return out;
        }
        out = out.add(&next);
        term = next;
        j += 1;
    }
}

/// Terms of `E^-(-α, x) = Π_{c,n} exp(p_c h^(c)_{-n} x^n / (d_c n))` of exact degree `deg`,
/// as lists of created factors with coefficients.
fn creation_terms(rank: usize, scaled: &[Rat], deg: u32) -> Vec<(Vec<(u16, u32)>, Rat)> {
    let active: Vec<u16> = (0..rank as u16).filter(|&c| !scaled[c as usize].is_zero()).collect();
    let mut out = Vec::new();
    let slots: Vec<(u16, u32)> = (1..=deg).flat_map(|n| active.iter().map(move |&c| (c, n))).collect();
    let mut cur = Vec::new();
    fill_creation(&slots, 0, deg, scaled, &mut cur, Rat::from_integer(1.into()), &mut out);
    out
}

fn fill_creation(
    slots: &[(u16, u32)],
    i: usize,
    remaining: u32,
    scaled: &[Rat],
    cur: &mut Vec<(u16, u32)>,
    coeff: Rat,
    out: &mut Vec<(Vec<(u16, u32)>, Rat)>,
) {
    if remaining == 0 {
        out.push((cur.clone(), coeff));
        return;
    }
    if i == slots.len() {
        return;
    }
    let (c, n) = slots[i];
    if n > remaining {
        return;
    }
    let base = &scaled[c as usize] / int(n as i64);
    let mut k = 0u32;
    let mut pow = Rat::from_integer(1.into());
    let start = cur.len();
    loop {
        let coef = &coeff * &pow / big(&factorial(k as u64));
        fill_creation(slots, i + 1, remaining - k * n, scaled, cur, coef, out);
        if (k + 1) * n > remaining {
            break;
        }
        k += 1;
        pow *= &base;
        cur.push((c, n));
    }
    cur.truncate(start);
}

struct Ctx<'a> {
    voa: &'a LatticeVoa,
    factors: Vec<(u16, u32)>,
    input_zero_modes: Vec<Rat>,
    /// `p_c(α) / d_c`
    scaled: Vec<Rat>,
    out_fock_weight: u32,
    out_charge: Vec<i64>,
    cocycle: Rat,
}

/// `a_(m) b` for basis states.
pub fn vertex_mode(voa: &LatticeVoa, a: &LatticeVOAState, m: i64, b: &LatticeVOAState) -> LatticeVector {
    let wa = voa.state_weight(a) as i64;
    let wb = voa.state_weight(b) as i64;
    let out_weight = wa + wb - m - 1;
    if out_weight < 0 {
        return LinComb::zero();
    }
    let gamma: Vec<i64> = a.charge.iter().zip(&b.charge).map(|(x, y)| x + y).collect();
    let out_fock = out_weight - voa.inner(&gamma, &gamma) / 2;
    if out_fock < 0 {
        return LinComb::zero();
    }
    let pa = voa.zero_modes(&a.charge);
    let scaled: Vec<Rat> = pa.iter().zip(voa.metric()).map(|(p, d)| p / d).collect();
    let metric = voa.metric();

    // E^+(-α, x) = Π exp(-p_c h^(c)_n x^{-n} / (d_c n)) on the input Fock part
    let mut start: FockVec = LinComb::basis(b.fock.clone());
    let wfock = b.fock.weight();
    for n in 1..=wfock {
        for c in 0..voa.rank() as u16 {
            if scaled[c as usize].is_zero() {
                continue;
            }
            let k = -&scaled[c as usize] / int(n as i64);
            start = exp_annihilator(&start, c, n, &k, metric);
        }
    }

    let ctx = Ctx {
        voa,
        factors: a.fock.modes().to_vec(),
        input_zero_modes: voa.zero_modes(&b.charge),
        scaled,
        out_fock_weight: out_fock as u32,
        out_charge: gamma,
        cocycle: int(voa.epsilon(&a.charge, &b.charge)),
    };
    let mut out = LinComb::zero();
    let mut creators = Vec::new();
    assign(&ctx, 0, start, &mut creators, int(1), &mut out);
    out
}

/// Chooses the mode `j` of factor `i` of `a`; annihilators act at once,
/// creators are collected and applied at the end.
fn assign(ctx: &Ctx<'_>, i: usize, v: FockVec, creators: &mut Vec<(u16, u32)>, coeff: Rat, out: &mut LatticeVector) {
    if v.is_zero() {
        return;
    }
    let created: u32 = creators.iter().map(|&(_, n)| n).sum();
    if i == ctx.factors.len() {
        finish(ctx, &v, creators, &coeff, out);
        return;
    }
    let (c, n) = ctx.factors[i];
    let metric = ctx.voa.metric();
    let vmax = v.iter().map(|(s, _)| s.weight()).max().unwrap_or(0);
    // annihilators and zero mode
    for j in 0..=vmax as i64 {
        let f = big(&binomial_signed(-j - 1, (n - 1) as u64));
        let next: FockVec = if j == 0 {
            let p = &ctx.input_zero_modes[c as usize];
            if p.is_zero() {
                continue;
            }
            v.scale(p)
        } else {
            let mut w = LinComb::zero();
            for (s, k) in v.iter() {
                if let Some((t, g)) = mode_on_monomial(s, c, j, metric) {
                    w.add_term(t, g * k);
                }
            }
            w
        };
        assign(ctx, i + 1, next, creators, &coeff * f, out);
    }
    // creators h_{-k}, k >= n (the coefficient C(k-1, n-1) vanishes below n)
    // later annihilators may still lower the weight, so only the creators bound this
    let budget = ctx.out_fock_weight as i64 - created as i64;
    for k in n as i64..=budget {
        let f = big(&binomial_signed(k - 1, (n - 1) as u64));
        creators.push((c, k as u32));
        assign(ctx, i + 1, v.clone(), creators, &coeff * f, out);
        creators.pop();
    }
}

fn finish(ctx: &Ctx<'_>, v: &FockVec, creators: &[(u16, u32)], coeff: &Rat, out: &mut LatticeVector) {
    let created: u32 = creators.iter().map(|&(_, n)| n).sum();
    let rank = ctx.voa.rank();
    for (s, k) in v.iter() {
        let have = s.weight() + created;
        if have > ctx.out_fock_weight {
            continue;
        }
        let deg = ctx.out_fock_weight - have;
        let base: Vec<(u16, u32)> = s.modes().iter().chain(creators).copied().collect();
        for (extra, e) in creation_terms(rank, &ctx.scaled, deg) {
            let mut modes = base.clone();
            modes.extend(extra);
            let state = LatticeVOAState::new(FockState::new(rank, modes), ctx.out_charge.clone());
            out.add_term(state, k * coeff * &e * &ctx.cocycle);
        }
    }
}

/// `a_(m) b` extended bilinearly.
pub fn vertex_mode_vec(voa: &LatticeVoa, a: &LatticeVector, m: i64, b: &LatticeVector) -> LatticeVector {
    let mut out = LinComb::zero();
    for (s, cs) in a.iter() {
        for (t, ct) in b.iter() {
            let r = vertex_mode(voa, s, m, t);
            out.add_scaled(&r, &(cs * ct));
        }
    }
    out
}

/// Degree-graded mode `a_n = a_(n + wt a - 1)` of a homogeneous vector, which maps
/// `V_k` to `V_{k-n}`.
pub fn graded_mode(voa: &LatticeVoa, a: &LatticeVector, n: i64, b: &LatticeVector) -> LatticeVector {
    let mut out = LinComb::zero();
    for (s, cs) in a.iter() {
        let m = n + voa.state_weight(s) as i64 - 1;
        for (t, ct) in b.iter() {
            out.add_scaled(&vertex_mode(voa, s, m, t), &(cs * ct));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::GradedSpace;
    use crate::lattice::voa::conformal_vector;
    use crate::lattice::EvenLattice;

    fn a1() -> LatticeVoa {
        LatticeVoa::new(EvenLattice::fixture("A1").unwrap())
    }

    fn b(s: LatticeVOAState) -> LatticeVector {
        LinComb::basis(s)
    }

    #[test]
    fn creation_property() {
        for voa in [a1(), LatticeVoa::heisenberg(2)] {
            let vac = b(voa.vacuum());
            for k in 0..4 {
                for s in voa.basis(k) {
                    let v = b(s.clone());
                    assert_eq!(vertex_mode_vec(&voa, &v, -1, &vac), v, "{s}");
                    for m in 0..3 {
                        assert!(vertex_mode_vec(&voa, &v, m, &vac).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn vacuum_acts_as_identity() {
        let voa = a1();
        let vac = b(voa.vacuum());
        for s in voa.basis(3) {
            let v = b(s);
            assert_eq!(vertex_mode_vec(&voa, &vac, -1, &v), v);
            assert!(vertex_mode_vec(&voa, &vac, 0, &v).is_zero());
        }
    }

    #[test]
    fn conformal_vector_modes_are_virasoro() {
        for voa in [a1(), LatticeVoa::heisenberg(1), LatticeVoa::new(EvenLattice::new("A2", vec![vec![2, -1], vec![-1, 2]]).unwrap())] {
            let nu = conformal_vector(&voa);
            for k in 0..4 {
                for s in voa.basis(k) {
                    let v = b(s.clone());
                    for m in -2..=3i64 {
                        let lhs = vertex_mode_vec(&voa, &nu, m + 1, &v);
                        assert_eq!(lhs, voa.virasoro(m, &v), "L_{m} on {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn weight_one_modes_are_heisenberg() {
        let voa = a1();
        let h = b(voa.neutral(FockState::new(1, vec![(0, 1)])));
        for s in voa.basis(3) {
            let v = b(s);
            for n in -2..=3 {
                assert_eq!(vertex_mode_vec(&voa, &h, n, &v), voa.heis_mode(0, n, &v));
            }
        }
    }

    #[test]
    fn charged_product() {
        // e^α_(-3) e^{-α} for the A1 root: e_α e^{-α} = ε(α,-α) Ω, times x^{-2}
        let voa = a1();
        let e = voa.vacuum().with_charge(vec![1]);
        let f = voa.vacuum().with_charge(vec![-1]);
        let r = vertex_mode(&voa, &e, 1, &f);
        assert_eq!(r, LinComb::term(voa.vacuum(), int(voa.epsilon(&[1], &[-1]))));
        // next mode down produces α_{-1} Ω
        let r = vertex_mode(&voa, &e, 0, &f);
        let h = voa.neutral(FockState::new(1, vec![(0, 1)]));
        assert_eq!(r.len(), 1);
        assert_eq!(r.coeff(&h), int(voa.epsilon(&[1], &[-1])));
    }
}
