//! Genus-one and genus-two theta series, and lattice-VOA graded dimensions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{count_by_norm, enumerate_by_norm};
use super::even::EvenLattice;
use crate::error::{Error, Result};
use crate::fock::colored_partition_numbers;
use crate::series::rat::int;
use crate::series::USeries;

/// `Σ_m #{α : ⟨α,α⟩ = 2m} q^m` up to `q^N`.
pub fn theta_genus1(l: &EvenLattice, trunc: usize) -> Result<USeries> {
    let counts = count_by_norm(l, 2 * trunc as i64)?;
    Ok(USeries::from_coeffs(counts.iter().map(|&c| int(c as i64)).collect(), trunc))
}

/// The half-integral matrix `T = [[t11, t12/2], [t12/2, t22]]` of a pair `(v1, v2)`:
/// `⟨v1,v1⟩ = 2 t11`, `⟨v2,v2⟩ = 2 t22`, `⟨v1,v2⟩ = t12`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfIntegralMatrix {
    pub t11: i64,
    pub t22: i64,
    /// Twice the off-diagonal entry, i.e. the inner product `⟨v1, v2⟩`.
    pub t12_twice: i64,
}

impl fmt::Display for HalfIntegralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t12_twice % 2 == 0 {
            write!(f, "[[{}, {}], [{}, {}]]", self.t11, self.t12_twice / 2, self.t12_twice / 2, self.t22)
        } else {
            write!(f, "[[{}, {}/2], [{}/2, {}]]", self.t11, self.t12_twice, self.t12_twice, self.t22)
        }
    }
}

/// Representation numbers `r_L(T)` for every `T` with diagonal entries `<= max_diag`.
///
/// Only nonzero counts are stored.
pub fn theta_genus2(l: &EvenLattice, max_diag: i64) -> Result<BTreeMap<HalfIntegralMatrix, u64>> {
    if max_diag < 0 {
        return Err(Error::Lattice("negative diagonal bound".into()));
    }
    let n = l.rank();
    let mut out = BTreeMap::new();
    if n == 0 {
        out.insert(HalfIntegralMatrix { t11: 0, t22: 0, t12_twice: 0 }, 1);
        return Ok(out);
    }
    let shells = enumerate_by_norm(l, 2 * max_diag)?;
    let flat: BTreeMap<i64, Vec<i32>> = shells
        .iter()
        .map(|(norm, vs)| (norm / 2, vs.iter().flatten().map(|&x| x as i32).collect()))
        .collect();
    let empty = Vec::new();
    for a in 0..=max_diag {
        for b in a..=max_diag {
            let left = shells.get(&(2 * a)).unwrap_or(&empty);
            let right = flat.get(&b).map(Vec::as_slice).unwrap_or(&[]);
            // |⟨v1,v2⟩| <= sqrt(2a · 2b) <= 2 max_diag
            let offset = 2 * max_diag;
            let width = (2 * offset + 1) as usize;
            let hist = left
                .par_iter()
                .filter(|v| is_canonical_sign(v))
                .fold(
                    || vec![0u64; width],
                    |mut acc, v1| {
                        let g: Vec<i32> = l.gram_times(v1).iter().map(|&x| x as i32).collect();
                        let mirror = v1.iter().any(|&x| x != 0);
                        for v2 in right.chunks_exact(n) {
                            let r: i32 = g.iter().zip(v2).map(|(x, y)| x * y).sum();
                            let r = r as i64;
                            acc[(r + offset) as usize] += 1;
                            if mirror {
                                acc[(offset - r) as usize] += 1;
                            }
                        }
                        acc
                    },
                )
                .reduce(
                    || vec![0u64; width],
                    |mut x, y| {
                        for (a, b) in x.iter_mut().zip(y) {
                            *a += b;
                        }
                        x
                    },
                );
            for (i, &c) in hist.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let r = i as i64 - offset;
                out.insert(HalfIntegralMatrix { t11: a, t22: b, t12_twice: r }, c);
                out.insert(HalfIntegralMatrix { t11: b, t22: a, t12_twice: r }, c);
            }
        }
    }
    Ok(out)
}

/// First nonzero coordinate positive, or the zero vector.
fn is_canonical_sign(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_none_or(|&x| x > 0)
}

/// `dim (V_L)_n = Σ_m r_L(2m) p_r(n - m)` for every `n <= trunc`.
pub fn lattice_voa_graded_dims(l: &EvenLattice, trunc: usize) -> Result<Vec<BigInt>> {
    let counts = count_by_norm(l, 2 * trunc as i64)?;
    let p = colored_partition_numbers(l.rank(), trunc);
    Ok((0..=trunc)
        .map(|n| {
            (0..=n).fold(BigInt::zero(), |acc, m| acc + BigInt::from(counts[m]) * &p[n - m])
        })
        .collect())
}

pub fn lattice_voa_graded_dim(l: &EvenLattice, n: usize) -> Result<BigInt> {
    Ok(lattice_voa_graded_dims(l, n)?.pop().expect("nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_theta() {
        let l = EvenLattice::fixture("E8").unwrap();
        assert_eq!(theta_genus1(&l, 3).unwrap(), USeries::from_ints(&[1, 240, 2160, 6720], 3));
    }

    #[test]
    fn trivial_theta() {
        let l = EvenLattice::fixture("trivial").unwrap();
        assert_eq!(theta_genus1(&l, 3).unwrap(), USeries::from_ints(&[1], 3));
        let g2 = theta_genus2(&l, 1).unwrap();
        assert_eq!(g2.len(), 1);
        assert_eq!(g2[&HalfIntegralMatrix { t11: 0, t22: 0, t12_twice: 0 }], 1);
    }

    #[test]
    fn genus2_small_cases() {
        let a1 = EvenLattice::fixture("A1").unwrap();
        let t = theta_genus2(&a1, 1).unwrap();
        assert_eq!(t[&HalfIntegralMatrix { t11: 0, t22: 0, t12_twice: 0 }], 1);
        assert_eq!(t[&HalfIntegralMatrix { t11: 1, t22: 1, t12_twice: 2 }], 2);
        assert_eq!(t[&HalfIntegralMatrix { t11: 1, t22: 1, t12_twice: -2 }], 2);
        assert_eq!(t[&HalfIntegralMatrix { t11: 1, t22: 0, t12_twice: 0 }], 2);
        assert!(!t.contains_key(&HalfIntegralMatrix { t11: 1, t22: 1, t12_twice: 0 }));
    }

    /// Exhaustive pairs on a small lattice as an independent check of the symmetry shortcuts.
    #[test]
    fn genus2_matches_exhaustive_pairs() {
        let l = EvenLattice::new("A2", vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let fast = theta_genus2(&l, 3).unwrap();
        let all: Vec<Vec<i64>> = enumerate_by_norm(&l, 6).unwrap().into_values().flatten().collect();
        let mut brute: BTreeMap<HalfIntegralMatrix, u64> = BTreeMap::new();
        for a in &all {
            for b in &all {
                let key = HalfIntegralMatrix { t11: l.norm(a) / 2, t22: l.norm(b) / 2, t12_twice: l.inner(a, b) };
                *brute.entry(key).or_default() += 1;
            }
        }
        assert_eq!(fast, brute);
    }

    #[test]
    fn graded_dims() {
        let e8 = EvenLattice::fixture("E8").unwrap();
        assert_eq!(lattice_voa_graded_dim(&e8, 1).unwrap(), BigInt::from(248));
        assert_eq!(lattice_voa_graded_dim(&e8, 0).unwrap(), BigInt::from(1));
        assert_eq!(lattice_voa_graded_dim(&e8, 2).unwrap(), BigInt::from(4124));
        let a1 = EvenLattice::fixture("A1").unwrap();
        assert_eq!(lattice_voa_graded_dims(&a1, 3).unwrap(), vec![1, 3, 4, 7].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }
}
