//! The lattice vertex algebra `V_L = M(1) ⊗ C[L]` on monomials `u ⊗ e^α`.
//!
//! Heisenberg colors are an orthogonal rational basis `f_c` of `L ⊗ Q`
//! (Gram–Schmidt on the lattice basis), so the mode algebra is diagonal with
//! metric `d_c = ⟨f_c, f_c⟩`. The zero mode `h^(c)_0` acts on `e^β` by
//! `⟨f_c, β⟩`. A free-boson factor without charges (`M_r(1)`) is the special
//! case of a rank-0 lattice with `r` extra colors.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use parking_lot::RwLock;

use super::enumerate::enumerate_by_norm;
use super::even::EvenLattice;
use crate::error::{Error, Result};
use crate::fock::heisenberg::{basis_shared, norm_with_metric};
use crate::fock::modes;
use crate::fock::{FockState, GradedSpace, LinComb};
use crate::linalg::Matrix;
use crate::series::rat::{int, sign};
use crate::series::Rat;

/// Bimultiplicative 2-cocycle `ε(α, β) = (-1)^{αᵀBβ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    b: Vec<Vec<i64>>,
}

impl Cocycle {
    /// `B` = strict lower triangle of `G` plus half its diagonal.
    pub fn standard(gram: &[Vec<i64>]) -> Self {
        let n = gram.len();
        let mut b = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..i {
                b[i][j] = gram[i][j];
            }
            b[i][i] = gram[i][i] / 2;
        }
        Cocycle { b }
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.b
    }

    /// `ε(α, β)` as `±1`.
    pub fn sign(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, ai) in a.iter().enumerate() {
            if ai & 1 == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                acc += (self.b[i][j] & 1) * (bj & 1);
            }
        }
        if acc % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Checks `B - Bᵀ ≡ G (mod 2)`.
    pub fn is_valid_for(&self, gram: &[Vec<i64>]) -> bool {
        let n = gram.len();
        (0..n).all(|i| (0..n).all(|j| (self.b[i][j] - self.b[j][i] - gram[i][j]).rem_euclid(2) == 0))
    }
}

/// A monomial `u ⊗ e^α`: a Fock monomial and a charge in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVOAState {
    pub fock: FockState,
    pub charge: Vec<i64>,
}

impl LatticeVOAState {
    pub fn new(fock: FockState, charge: Vec<i64>) -> Self {
        LatticeVOAState { fock, charge }
    }

    pub fn is_vacuum(&self) -> bool {
        self.fock.is_vacuum() && self.charge.iter().all(|&x| x == 0)
    }

    pub fn with_charge(&self, charge: Vec<i64>) -> Self {
        LatticeVOAState { fock: self.fock.clone(), charge }
    }

    pub fn conjugate_charge(&self) -> Vec<i64> {
        self.charge.iter().map(|x| -x).collect()
    }

    /// Parses `"<fock> @ [a, b, ...]"`; the charge part may be omitted.
    pub fn parse(rank: usize, lattice_rank: usize, text: &str) -> Option<Self> {
        let (fock_text, charge) = match text.split_once('@') {
            Some((f, c)) => {
                let c = c.trim().strip_prefix('[')?.strip_suffix(']')?;
                let charge: Option<Vec<i64>> = if c.trim().is_empty() {
                    Some(Vec::new())
                } else {
                    c.split(',').map(|x| x.trim().parse().ok()).collect()
                };
                (f, charge?)
            }
            None => (text, vec![0; lattice_rank]),
        };
        if charge.len() != lattice_rank {
            return None;
        }
        Some(LatticeVOAState { fock: FockState::parse(rank, fock_text)?, charge })
    }
}

impl fmt::Display for LatticeVOAState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.charge.iter().all(|&x| x == 0) {
            write!(f, "{}", self.fock)
        } else {
            let c: Vec<String> = self.charge.iter().map(|x| x.to_string()).collect();
            write!(f, "{} @ [{}]", self.fock, c.join(", "))
        }
    }
}

pub type LatticeVector = LinComb<LatticeVOAState>;

type StateCache = RwLock<HashMap<u32, Arc<Vec<LatticeVOAState>>>>;

/// A lattice vertex algebra, optionally with extra uncharged free bosons.
pub struct LatticeVoa {
    lattice: EvenLattice,
    metric: Vec<Rat>,
    /// `projection[c][i] = ⟨f_c, e_i⟩`, so `h^(c)_0 e^β = Σ_i projection[c][i] β_i e^β`.
    projection: Vec<Vec<Rat>>,
    cocycle: Cocycle,
    shells: RwLock<Vec<Vec<Vec<i64>>>>,
    bases: StateCache,
}

impl fmt::Debug for LatticeVoa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeVoa")
            .field("lattice", &self.lattice.name())
            .field("rank", &self.rank())
            .finish()
    }
}

impl LatticeVoa {
    pub fn new(lattice: EvenLattice) -> Self {
        let (fs, ds) = lattice.orthogonal_basis();
        let g = lattice.gram();
        let n = lattice.rank();
        let projection = fs
            .iter()
            .map(|f| (0..n).map(|i| (0..n).fold(Rat::zero(), |acc, k| acc + &f[k] * int(g[k][i]))).collect())
            .collect();
        let cocycle = Cocycle::standard(g);
        Self::assemble(lattice, ds, projection, cocycle)
    }

    /// `M_r(1)` in the same state language (empty charges).
    pub fn heisenberg(rank: usize) -> Self {
        let trivial = EvenLattice::new(format!("M{rank}"), Vec::new()).expect("rank-0 lattice");
        Self::assemble(trivial, vec![int(1); rank], vec![Vec::new(); rank], Cocycle { b: Vec::new() })
    }

    fn assemble(lattice: EvenLattice, metric: Vec<Rat>, projection: Vec<Vec<Rat>>, cocycle: Cocycle) -> Self {
        LatticeVoa {
            lattice,
            metric,
            projection,
            cocycle,
            shells: RwLock::new(Vec::new()),
            bases: RwLock::new(HashMap::new()),
        }
    }

    pub fn lattice(&self) -> &EvenLattice {
        &self.lattice
    }

    pub fn name(&self) -> &str {
        self.lattice.name()
    }

    /// Number of Heisenberg colors.
    pub fn rank(&self) -> usize {
        self.metric.len()
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn metric(&self) -> &[Rat] {
        &self.metric
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        self.lattice.inner(a, b)
    }

    pub fn epsilon(&self, a: &[i64], b: &[i64]) -> i64 {
        self.cocycle.sign(a, b)
    }

    /// `κ(α) = (-1)^{⟨α,α⟩/2} ε(α, -α)`, the value of `(e^α, e^{-α})`.
    pub fn kappa(&self, a: &[i64]) -> i64 {
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        let s = if (self.lattice.norm(a) / 2) % 2 == 0 { 1 } else { -1 };
        s * self.epsilon(a, &neg)
    }

    /// Zero-mode eigenvalues `⟨f_c, β⟩` on `e^β`.
    pub fn zero_modes(&self, beta: &[i64]) -> Vec<Rat> {
        self.projection
            .iter()
            .map(|row| row.iter().zip(beta).fold(Rat::zero(), |acc, (p, b)| acc + p * int(*b)))
            .collect()
    }

    pub fn zero_charge(&self) -> Vec<i64> {
        vec![0; self.lattice_rank()]
    }

    pub fn state(&self, fock: FockState, charge: Vec<i64>) -> LatticeVOAState {
        LatticeVOAState { fock, charge }
    }

    pub fn neutral(&self, fock: FockState) -> LatticeVOAState {
        LatticeVOAState { fock, charge: self.zero_charge() }
    }

    /// Vectors of norm `2m`, in sorted order.
    pub fn shell(&self, m: usize) -> Vec<Vec<i64>> {
        if let Some(s) = self.shells.read().get(m) {
            return s.clone();
        }
        let mut shells = self.shells.write();
        if shells.len() <= m {
            let found = enumerate_by_norm(&self.lattice, 2 * m as i64).expect("validated lattice");
            *shells = (0..=m).map(|k| found.get(&(2 * k as i64)).cloned().unwrap_or_default()).collect();
        }
        shells[m].clone()
    }

    pub fn basis_shared(&self, k: u32) -> Arc<Vec<LatticeVOAState>> {
        if let Some(b) = self.bases.read().get(&k) {
            return b.clone();
        }
        let mut out = Vec::new();
        for m in 0..=k {
            let fock = basis_shared(self.rank(), k - m);
            for alpha in self.shell(m as usize) {
                for u in fock.iter() {
                    out.push(LatticeVOAState { fock: u.clone(), charge: alpha.clone() });
                }
            }
        }
        out.sort();
        let out = Arc::new(out);
        self.bases.write().insert(k, out.clone());
        out
    }

    pub fn state_weight(&self, s: &LatticeVOAState) -> u32 {
        s.fock.weight() + (self.lattice.norm(&s.charge) / 2) as u32
    }

    /// `(u ⊗ e^α, v ⊗ e^β)`: zero unless `β = -α` and `u = v`.
    pub fn bilinear_states(&self, a: &LatticeVOAState, b: &LatticeVOAState) -> Rat {
        if a.fock != b.fock || a.charge.iter().zip(&b.charge).any(|(x, y)| x + y != 0) {
            return Rat::zero();
        }
        sign(a.fock.num_modes() as i64) * norm_with_metric(&a.fock, &self.metric) * int(self.kappa(&a.charge))
    }

    /// `h^(c)_n` on a vector.
    pub fn heis_mode(&self, color: u16, n: i64, v: &LatticeVector) -> LatticeVector {
        let mut out = LinComb::zero();
        for (s, c) in v.iter() {
            if n == 0 {
                let p = &self.zero_modes(&s.charge)[color as usize];
                if !p.is_zero() {
                    out.add_term(s.clone(), p * c);
                }
            } else if let Some((t, k)) = modes::mode_on_monomial(&s.fock, color, n, &self.metric) {
                out.add_term(s.with_fock(t), k * c);
            }
        }
        out
    }
}

impl LatticeVOAState {
    pub fn with_fock(&self, fock: FockState) -> Self {
        LatticeVOAState { fock, charge: self.charge.clone() }
    }
}

impl GradedSpace for LatticeVoa {
    type State = LatticeVOAState;

    fn central_charge(&self) -> Rat {
        int(self.rank() as i64)
    }

    fn basis(&self, k: u32) -> Vec<LatticeVOAState> {
        self.basis_shared(k).as_ref().clone()
    }

    fn dim(&self, k: u32) -> usize {
        self.basis_shared(k).len()
    }

    fn weight(&self, s: &LatticeVOAState) -> u32 {
        self.state_weight(s)
    }

    fn bilinear(&self, a: &LatticeVOAState, b: &LatticeVOAState) -> Rat {
        self.bilinear_states(a, b)
    }

    fn dual(&self, s: &LatticeVOAState) -> LatticeVector {
        let partner = s.with_charge(s.conjugate_charge());
        let f = self.bilinear_states(s, &partner);
        LinComb::term(partner, f.recip())
    }

    fn virasoro(&self, m: i64, v: &LatticeVector) -> LatticeVector {
        let mut out = LinComb::zero();
        for (s, c) in v.iter() {
            let p = self.zero_modes(&s.charge);
            let one = LinComb::term(s.fock.clone(), c.clone());
            let image = modes::virasoro(m, &one, &self.metric, &p);
            for (t, k) in image.iter() {
                out.add_term(s.with_fock(t.clone()), k.clone());
            }
        }
        out
    }

    fn vacuum(&self) -> LatticeVOAState {
        self.neutral(FockState::vacuum(self.rank()))
    }
}

/// The conformal vector `ν = Σ_c (1 / 2d_c) h^(c)_{-1} h^(c)_{-1} Ω`.
pub fn conformal_vector(voa: &LatticeVoa) -> LatticeVector {
    let mut v = LinComb::zero();
    for c in 0..voa.rank() {
        let s = voa.neutral(FockState::new(voa.rank(), vec![(c as u16, 1), (c as u16, 1)]));
        v.add_term(s, (int(2) * &voa.metric()[c]).recip());
    }
    v
}

/// Bilinear Gram of `V_k`, checked for symmetry and nondegeneracy.
pub fn lattice_bilinear_gram(voa: &LatticeVoa, k: u32) -> Result<(Vec<LatticeVOAState>, Matrix)> {
    let basis = voa.basis(k);
    let g = voa.gram(k);
    if !g.is_symmetric() {
        return Err(Error::Invariant(format!("bilinear Gram of weight {k} is not symmetric")));
    }
    // block structure: each row has exactly one nonzero entry
    for i in 0..g.rows() {
        if g.row(i).iter().filter(|x| !x.is_zero()).count() != 1 {
            return Err(Error::Invariant(format!("bilinear Gram of weight {k} is degenerate")));
        }
    }
    Ok((basis, g))
}

/// `(ν, ν)`, which equals `c / 2`.
pub fn conformal_norm(voa: &LatticeVoa) -> Rat {
    let nu = conformal_vector(voa);
    voa.bilinear_vec(&nu, &nu)
}
