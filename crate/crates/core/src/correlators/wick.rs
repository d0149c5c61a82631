//! Free-field (Wick) evaluation of sphere correlators.
//!
//! A monomial `h^(c1)_{-n1} ... e^α` inserted at `x` is the normal-ordered
//! product of the legs `∂^{n-1} h^(c)(x) / (n-1)!` and the vertex operator of
//! `e^α`. The correlator is the charge factor
//! `Π_{i<j} ε(α_i, α_j) (x_i - x_j)^{⟨α_i, α_j⟩}` times a sum over partial
//! matchings of the legs: matched legs give the differentiated propagator,
//! unmatched legs are absorbed by the charges at the other insertions.
//! Different colors never interact, so the matching sum factorises by color.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeVOAState, LatticeVector, LatticeVoa};
use crate::series::rat::{big, binomial, int, pow_i, sign};
use crate::series::Rat;

/// A state inserted at an exact point.
#[derive(Clone, Debug)]
pub struct Insertion {
    pub state: LatticeVector,
    pub point: Rat,
}

impl Insertion {
    pub fn new(state: LatticeVector, point: Rat) -> Self {
        Insertion { state, point }
    }

    pub fn monomial(state: LatticeVOAState, point: Rat) -> Self {
        Insertion { state: LatticeVector::basis(state), point }
    }
}

#[derive(Clone, Copy)]
struct Leg {
    at: usize,
    a: u32,
}

/// `⟨Ω, Y(s_1, x_1) ... Y(s_n, x_n) Ω⟩` for basis states.
pub fn wick_monomials(voa: &LatticeVoa, states: &[&LatticeVOAState], points: &[Rat]) -> Result<Rat> {
    let n = states.len();
    for i in 0..n {
        for j in 0..i {
            if points[i] == points[j] {
                return Err(Error::Pole(format!("insertions {j} and {i} share a point")));
            }
        }
    }
    let lr = voa.lattice_rank();
    let mut total = vec![0i64; lr];
    for s in states {
        for (t, c) in total.iter_mut().zip(&s.charge) {
            *t += c;
        }
    }
    if total.iter().any(|&t| t != 0) {
        return Ok(Rat::zero());
    }

    let diff = |i: usize, j: usize| &points[i] - &points[j];
    let charged: Vec<usize> = (0..n).filter(|&i| states[i].charge.iter().any(|&x| x != 0)).collect();

    let mut value = Rat::one();
    for (ci, &i) in charged.iter().enumerate() {
        for &j in &charged[ci + 1..] {
            let e = voa.inner(&states[i].charge, &states[j].charge);
            value *= int(voa.epsilon(&states[i].charge, &states[j].charge)) * pow_i(&diff(i, j), e)?;
        }
    }

    let rank = voa.rank();
    let zero_modes: Vec<Vec<Rat>> = charged.iter().map(|&i| voa.zero_modes(&states[i].charge)).collect();
    for color in 0..rank as u16 {
        let legs: Vec<Leg> = states
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.fock.modes().iter().filter(|m| m.0 == color).map(move |&(_, k)| Leg { at: i, a: k - 1 }))
            .collect();
        if legs.is_empty() {
            continue;
        }
        let d = &voa.metric()[color as usize];
        // source term for each leg from the charges elsewhere
        let mut source = Vec::with_capacity(legs.len());
        for leg in &legs {
            let mut s = Rat::zero();
            for (ci, &j) in charged.iter().enumerate() {
                let p = &zero_modes[ci][color as usize];
                if j == leg.at || p.is_zero() {
                    continue;
                }
                s += p * sign(leg.a as i64) * pow_i(&diff(leg.at, j), -(leg.a as i64 + 1))?;
            }
            source.push(s);
        }
        let m = legs.len();
        let mut pair = vec![vec![Rat::zero(); m]; m];
        for x in 0..m {
            for y in x + 1..m {
                let (l1, l2) = (legs[x], legs[y]);
                if l1.at == l2.at {
                    continue;
                }
                let s = (l1.a + l2.a) as u64;
                // (a1+a2+1)! / (a1! a2!) = (s+1) C(s, a1)
                let coeff = big(&(binomial(s, l1.a as u64) * (s + 1)));
                let v = d * sign(l1.a as i64) * coeff * pow_i(&diff(l1.at, l2.at), -(s as i64 + 2))?;
                pair[x][y] = v.clone();
                pair[y][x] = v;
            }
        }
        if m > 63 {
            return Err(Error::Budget(format!("{m} legs of one color exceed the matching engine")));
        }
        let mut memo = HashMap::new();
        let full: u64 = (1u64 << m) - 1;
        let factor = matchings(full, &source, &pair, &mut memo);
        if factor.is_zero() {
            return Ok(Rat::zero());
        }
        value *= factor;
    }
    Ok(value)
}

/// Sum over partial matchings of the legs in `mask`.
fn matchings(mask: u64, source: &[Rat], pair: &[Vec<Rat>], memo: &mut HashMap<u64, Rat>) -> Rat {
    if mask == 0 {
        return Rat::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let first = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << first);
    let mut acc = Rat::zero();
    if !source[first].is_zero() {
        acc += &source[first] * matchings(rest, source, pair, memo);
    }
    let mut r = rest;
    while r != 0 {
        let other = r.trailing_zeros() as usize;
        r &= r - 1;
        if pair[first][other].is_zero() {
            continue;
        }
        acc += &pair[first][other] * matchings(rest & !(1u64 << other), source, pair, memo);
    }
    memo.insert(mask, acc.clone());
    acc
}

/// Correlator of arbitrary vectors, expanded multilinearly.
pub fn wick_correlator(voa: &LatticeVoa, insertions: &[Insertion]) -> Result<Rat> {
    let points: Vec<Rat> = insertions.iter().map(|i| i.point.clone()).collect();
    let terms: Vec<Vec<(&LatticeVOAState, &Rat)>> = insertions.iter().map(|i| i.state.iter().collect()).collect();
    let mut acc = Rat::zero();
    let mut idx = vec![0usize; terms.len()];
    if terms.iter().any(|t| t.is_empty()) {
        return Ok(acc);
    }
    loop {
        let states: Vec<&LatticeVOAState> = idx.iter().zip(&terms).map(|(&k, t)| t[k].0).collect();
        let mut coeff = Rat::one();
        for (&k, t) in idx.iter().zip(&terms) {
            coeff *= t[k].1;
        }
        let v = wick_monomials(voa, &states, &points)?;
        if !v.is_zero() {
            acc += coeff * v;
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(acc);
            }
            idx[i] += 1;
            if idx[i] < terms[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
