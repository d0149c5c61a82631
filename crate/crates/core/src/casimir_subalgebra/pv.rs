//! Weight-truncated approximation of the subalgebra generated by Casimir elements.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use parking_lot::RwLock;
use rayon::prelude::*;

use super::casimir::dual_pairs;
use crate::error::{Error, Result};
use crate::fock::GradedSpace;
use crate::lattice::{graded_mode, vertex_mode, LatticeVOAState, LatticeVector, LatticeVoa};
use crate::linalg::{Matrix, RowSpace};
use crate::series::Rat;

/// Default cap on Casimir endomorphism applications in one closure.
pub const DEFAULT_PV_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug)]
pub struct PVPiece {
    pub weight: u32,
    pub dim_v: usize,
    /// Echelon basis of `PV_k` in coordinates over the monomial basis of `V_k`.
    pub basis: Vec<Vec<Rat>>,
}

impl PVPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug)]
pub struct PVFiltration {
    pub cutoff: u32,
    pub pieces: Vec<PVPiece>,
    /// Number of Casimir endomorphism applications performed.
    pub applications: u64,
}

impl PVFiltration {
    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(PVPiece::dim).collect()
    }

    pub fn contains(&self, voa: &LatticeVoa, v: &LatticeVector) -> Result<bool> {
        let k = homogeneous_weight(voa, v)?;
        let Some(piece) = self.pieces.get(k as usize) else {
            return Err(Error::Invalid(format!("weight {k} beyond the cutoff {}", self.cutoff)));
        };
        let mut space = RowSpace::new(piece.dim_v);
        for b in &piece.basis {
            space.insert(b);
        }
        Ok(space.contains(&v.coords(&voa.basis_shared(k))))
    }

    /// The basis of `PV_k` as vectors.
    pub fn vectors(&self, voa: &LatticeVoa, k: u32) -> Vec<LatticeVector> {
        let basis = voa.basis_shared(k);
        self.pieces[k as usize].basis.iter().map(|c| LatticeVector::from_coords(&basis, c)).collect()
    }
}

fn homogeneous_weight(voa: &LatticeVoa, v: &LatticeVector) -> Result<u32> {
    let mut w = None;
    for (s, _) in v.iter() {
        let ws = voa.state_weight(s);
        if w.is_some_and(|x| x != ws) {
            return Err(Error::Invalid("vector is not homogeneous".into()));
        }
        w = Some(ws);
    }
    Ok(w.unwrap_or(0))
}

/// Memoised monomial modes `s_(m) t`; the closure revisits the same pairs many times.
#[derive(Default)]
struct ModeCache {
    map: RwLock<HashMap<(LatticeVOAState, i64, LatticeVOAState), Arc<LatticeVector>>>,
}

impl ModeCache {
    fn monomial(&self, voa: &LatticeVoa, s: &LatticeVOAState, m: i64, t: &LatticeVOAState) -> Arc<LatticeVector> {
        let key = (s.clone(), m, t.clone());
        if let Some(v) = self.map.read().get(&key) {
            return v.clone();
        }
        let v = Arc::new(vertex_mode(voa, s, m, t));
        self.map.write().insert(key, v.clone());
        v
    }

    /// Same as [`graded_mode`].
    fn graded(&self, voa: &LatticeVoa, a: &LatticeVector, n: i64, b: &LatticeVector) -> LatticeVector {
        let mut out = LatticeVector::zero();
        for (s, cs) in a.iter() {
            let m = n + voa.state_weight(s) as i64 - 1;
            for (t, ct) in b.iter() {
                out.add_scaled(&self.monomial(voa, s, m, t), &(cs * ct));
            }
        }
        out
    }
}

/// Images of `x` (of weight `d`) under every `C_k(m, n)` with `k <= cutoff` whose
/// intermediate and final weights stay within the window.
fn images(
    voa: &LatticeVoa,
    cache: &ModeCache,
    pairs: &[Vec<(LatticeVector, LatticeVector)>],
    cutoff: u32,
    d: u32,
    x: &LatticeVector,
) -> Vec<(u32, LatticeVector)> {
    let w = cutoff as i64;
    let d = d as i64;
    let jobs: Vec<(usize, i64)> = (0..pairs.len()).flat_map(|k| (d - w..=d).map(move |n| (k, n))).collect();
    let per_job: Vec<Vec<(u32, LatticeVector)>> = jobs
        .par_iter()
        .map(|&(k, n)| {
            let mut out = Vec::new();
            let mid = d - n;
            // (v^i)_n x for every dual vector
            let ys: Vec<(usize, LatticeVector)> = pairs[k]
                .iter()
                .enumerate()
                .map(|(i, (_, dv))| (i, cache.graded(voa, dv, n, x)))
                .filter(|(_, y)| !y.is_zero())
                .collect();
            if ys.is_empty() {
                return out;
            }
            for m in mid - w..=mid {
                let mut z = LatticeVector::zero();
                for (i, y) in &ys {
                    z = z.add(&cache.graded(voa, &pairs[k][*i].0, m, y));
                }
                if !z.is_zero() {
                    out.push(((mid - m) as u32, z));
                }
            }
            out
        })
        .collect();
    per_job.into_iter().flatten().collect()
}

/// Closure of `span{Ω}` under Casimir endomorphisms `C_k(m, n)`, `k <= cutoff`,
/// keeping every weight within `0..=cutoff`.
pub fn pv_filtration(voa: &LatticeVoa, cutoff: u32) -> Result<PVFiltration> {
    pv_filtration_with(voa, cutoff, DEFAULT_PV_BUDGET)
}

pub fn pv_filtration_with(voa: &LatticeVoa, cutoff: u32, budget: u64) -> Result<PVFiltration> {
    let bases: Vec<std::sync::Arc<Vec<LatticeVOAState>>> = (0..=cutoff).map(|k| voa.basis_shared(k)).collect();
    let pairs: Vec<Vec<(LatticeVector, LatticeVector)>> = (0..=cutoff).map(|k| dual_pairs(voa, k)).collect();
    let per_vector: u64 = pairs.iter().map(|p| p.len() as u64).sum::<u64>() * (cutoff as u64 + 1) * (cutoff as u64 + 2);
    let mut spaces: Vec<RowSpace> = bases.iter().map(|b| RowSpace::new(b.len())).collect();
    let mut queue = VecDeque::new();
    let vac = LatticeVector::basis(voa.vacuum());
    spaces[0].insert(&vac.coords(&bases[0]));
    queue.push_back((0u32, vac));
    let mut applications = 0u64;
    let cache = ModeCache::default();
    while let Some((d, x)) = queue.pop_front() {
        applications += per_vector;
        if applications > budget {
            return Err(Error::Budget(format!(
                "Casimir closure to weight {cutoff} needs more than {budget} endomorphism applications"
            )));
        }
        for (t, z) in images(voa, &cache, &pairs, cutoff, d, &x) {
            let c = z.coords(&bases[t as usize]);
            if spaces[t as usize].insert(&c) {
                queue.push_back((t, z));
            }
        }
    }
    let pieces = spaces
        .into_iter()
        .enumerate()
        .map(|(k, s)| PVPiece { weight: k as u32, dim_v: bases[k].len(), basis: s.basis() })
        .collect();
    Ok(PVFiltration { cutoff, pieces, applications })
}

/// Reapplies every generator to every basis vector and confirms nothing new appears.
pub fn is_closed(voa: &LatticeVoa, pv: &PVFiltration) -> bool {
    let pairs: Vec<Vec<(LatticeVector, LatticeVector)>> = (0..=pv.cutoff).map(|k| dual_pairs(voa, k)).collect();
    let spaces: Vec<RowSpace> = pv
        .pieces
        .iter()
        .map(|p| {
            let mut s = RowSpace::new(p.dim_v);
            p.basis.iter().for_each(|b| {
                s.insert(b);
            });
            s
        })
        .collect();
    let cache = ModeCache::default();
    for k in 0..=pv.cutoff {
        for x in pv.vectors(voa, k) {
            for (t, z) in images(voa, &cache, &pairs, pv.cutoff, k, &x) {
                if !spaces[t as usize].contains(&z.coords(&voa.basis_shared(t))) {
                    return false;
                }
            }
        }
    }
    true
}

/// The sign flip `h -> -h` on charge-free states.
pub fn flip_heisenberg(v: &LatticeVector) -> LatticeVector {
    let mut out = LatticeVector::zero();
    for (s, c) in v.iter() {
        let sign = if s.fock.num_modes() % 2 == 0 { c.clone() } else { -c.clone() };
        out.add_term(s.clone(), sign);
    }
    out
}

/// Number of partitions of each `n <= max` into an even number of parts.
pub fn even_part_partition_counts(max: usize) -> Vec<BigInt> {
    // p[n][parity]
    let mut p = vec![[BigInt::zero(), BigInt::zero()]; max + 1];
    p[0][0] = BigInt::from(1);
    for part in 1..=max {
        for n in part..=max {
            let (even, odd) = (p[n - part][1].clone(), p[n - part][0].clone());
            p[n][0] += even;
            p[n][1] += odd;
        }
    }
    p.into_iter().map(|[e, _]| e).collect()
}

/// Outcome of the trace test on the orthogonal complement of `PV_d`.
#[derive(Clone, Debug)]
pub struct TraceReport {
    pub d: u32,
    pub k: u32,
    pub complement_dim: usize,
    /// `Tr_{V_k} a_0` for each complement basis vector `a`.
    pub traces: Vec<Rat>,
    pub passed: bool,
}

/// `Tr_{V_k} a_0` over the monomial basis.
pub fn zero_mode_trace(voa: &LatticeVoa, a: &LatticeVector, k: u32) -> Rat {
    let mut acc = Rat::zero();
    for s in voa.basis_shared(k).iter() {
        let image = graded_mode(voa, a, 0, &LatticeVector::basis(s.clone()));
        acc += image.coeff(s);
    }
    acc
}

/// Basis of `{a ∈ V_d : (a, p) = 0 for all p ∈ PV_d}`.
pub fn orthogonal_complement(voa: &LatticeVoa, pv: &PVFiltration, d: u32) -> Result<Vec<LatticeVector>> {
    let piece = pv.pieces.get(d as usize).ok_or_else(|| Error::Invalid(format!("weight {d} beyond the cutoff")))?;
    let basis = voa.basis_shared(d);
    if piece.basis.is_empty() {
        return Ok(basis.iter().map(|s| LatticeVector::basis(s.clone())).collect());
    }
    let vectors = pv.vectors(voa, d);
    let rows: Vec<Vec<Rat>> = vectors
        .iter()
        .map(|p| basis.iter().map(|s| voa.bilinear_vec(p, &LatticeVector::basis(s.clone()))).collect())
        .collect();
    Ok(Matrix::from_rows(rows).nullspace().into_iter().map(|c| LatticeVector::from_coords(&basis, &c)).collect())
}

pub fn trace_orthogonality_check(voa: &LatticeVoa, pv: &PVFiltration, d: u32, k: u32) -> Result<TraceReport> {
    let complement = orthogonal_complement(voa, pv, d)?;
    let traces: Vec<Rat> = complement.par_iter().map(|a| zero_mode_trace(voa, a, k)).collect();
    let passed = traces.iter().all(Zero::is_zero);
    Ok(TraceReport { d, k, complement_dim: complement.len(), traces, passed })
}
