//! Vertex algebra models and their flattened free-field realisation.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::colored_partition_numbers;
use crate::lattice::{lattice_voa_graded_dims, EvenLattice, LatticeVOAState, LatticeVoa};
use crate::series::rat::int;
use crate::series::Rat;

/// A concrete vertex algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VOAModel {
    /// `M_r(1)`, the rank-`r` Heisenberg algebra.
    Heisenberg(usize),
    Lattice(EvenLattice),
    Tensor(Vec<VOAModel>),
}

impl VOAModel {
    pub fn heisenberg(rank: usize) -> Self {
        VOAModel::Heisenberg(rank)
    }

    pub fn lattice(name: &str) -> Result<Self> {
        Ok(VOAModel::Lattice(EvenLattice::fixture(name)?))
    }

    pub fn tensor(factors: Vec<VOAModel>) -> Self {
        VOAModel::Tensor(factors)
    }

    /// Parses `heisenberg:r`, `lattice:NAME`, `trivial` or `tensor:A,B,...`.
    ///
    /// Tensor factors are split on top-level commas, so `tensor:lattice:E8,lattice:E8`
    /// has two factors; nested tensors flatten.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &EvenLattice::fixture)
    }

    /// As [`VOAModel::parse`], resolving lattice names with `lattice`.
    pub fn parse_with(text: &str, lattice: &dyn Fn(&str) -> Result<EvenLattice>) -> Result<Self> {
        let text = text.trim();
        if text == "trivial" {
            return Ok(VOAModel::Lattice(EvenLattice::fixture("trivial")?));
        }
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("model descriptor {text:?} has no kind prefix")))?;
        match kind {
            "heisenberg" => {
                let r = rest
                    .parse::<usize>()
                    .map_err(|_| Error::Invalid(format!("bad Heisenberg rank {rest:?}")))?;
                Ok(VOAModel::Heisenberg(r))
            }
            "lattice" => Ok(VOAModel::Lattice(lattice(rest)?)),
            "tensor" => {
                let mut factors = Vec::new();
                let mut pending: Option<String> = None;
                for piece in rest.split(',') {
                    let piece = piece.trim();
                    // a bare piece continues nothing; every factor starts with a kind prefix
                    if piece.contains(':') || piece == "trivial" {
                        if let Some(p) = pending.take() {
                            factors.push(VOAModel::parse_with(&p, lattice)?);
                        }
                        pending = Some(piece.to_string());
                    } else {
                        return Err(Error::Invalid(format!("tensor factor {piece:?} has no kind prefix")));
                    }
                }
                if let Some(p) = pending {
                    factors.push(VOAModel::parse_with(&p, lattice)?);
                }
                if factors.is_empty() {
                    return Err(Error::Invalid("empty tensor product".into()));
                }
                Ok(VOAModel::Tensor(factors))
            }
            _ => Err(Error::Invalid(format!("unknown model kind {kind:?}"))),
        }
    }

    pub fn central_charge(&self) -> u32 {
        match self {
            VOAModel::Heisenberg(r) => *r as u32,
            VOAModel::Lattice(l) => l.rank() as u32,
            VOAModel::Tensor(fs) => fs.iter().map(VOAModel::central_charge).sum(),
        }
    }

    /// Unimodular lattices (and tensor products of them) give holomorphic algebras.
    pub fn is_holomorphic(&self) -> bool {
        match self {
            VOAModel::Heisenberg(r) => *r == 0,
            VOAModel::Lattice(l) => l.determinant().is_one() || l.rank() == 0,
            VOAModel::Tensor(fs) => fs.iter().all(VOAModel::is_holomorphic),
        }
    }

    /// Checks that a model claimed to be holomorphic has central charge divisible by 8.
    pub fn check_holomorphic_claim(&self) -> Result<()> {
        if !self.is_holomorphic() {
            return Err(Error::Invalid(format!("{self} is not holomorphic")));
        }
        if !self.central_charge().is_multiple_of(8) {
            return Err(Error::Invariant(format!(
                "holomorphic model {self} has central charge {} not divisible by 8",
                self.central_charge()
            )));
        }
        Ok(())
    }

    /// `dim V_n` for `n <= trunc`.
    pub fn graded_dims(&self, trunc: usize) -> Result<Vec<BigInt>> {
        match self {
            VOAModel::Heisenberg(r) => Ok(colored_partition_numbers(*r, trunc)),
            VOAModel::Lattice(l) => lattice_voa_graded_dims(l, trunc),
            VOAModel::Tensor(fs) => {
                let mut acc = vec![BigInt::zero(); trunc + 1];
                acc[0] = BigInt::one();
                for f in fs {
                    let d = f.graded_dims(trunc)?;
                    let mut next = vec![BigInt::zero(); trunc + 1];
                    for i in 0..=trunc {
                        for j in 0..=trunc - i {
                            next[i + j] += &acc[i] * &d[j];
                        }
                    }
                    acc = next;
                }
                Ok(acc)
            }
        }
    }

    fn flatten_into(&self, out: &mut Vec<Arc<LatticeVoa>>) {
        match self {
            VOAModel::Heisenberg(r) => out.push(Arc::new(LatticeVoa::heisenberg(*r))),
            VOAModel::Lattice(l) => out.push(Arc::new(LatticeVoa::new(l.clone()))),
            VOAModel::Tensor(fs) => fs.iter().for_each(|f| f.flatten_into(out)),
        }
    }
}

impl fmt::Display for VOAModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VOAModel::Heisenberg(r) => write!(f, "heisenberg:{r}"),
            VOAModel::Lattice(l) if l.rank() == 0 => write!(f, "trivial"),
            VOAModel::Lattice(l) => write!(f, "lattice:{}", l.name()),
            VOAModel::Tensor(fs) => {
                write!(f, "tensor:")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    // nested tensors are written flattened
                    match x {
                        VOAModel::Tensor(_) => write!(f, "{}", x.to_string().trim_start_matches("tensor:"))?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// One homogeneous block of a tensor basis: a weight for each factor.
#[derive(Clone, Debug)]
struct Block {
    bases: Vec<Arc<Vec<LatticeVOAState>>>,
    len: u64,
}

/// A basis state of a (possibly tensor) model, as one state per factor.
pub type TupleState = Vec<LatticeVOAState>;

/// The free-field realisation of a model as a list of lattice factors.
///
/// Bases are products of factor bases and duals are products of factor duals;
/// every basis state has a single-term dual `coeff · partner`.
#[derive(Clone, Debug)]
pub struct ModelEngine {
    model: VOAModel,
    factors: Vec<Arc<LatticeVoa>>,
}

impl ModelEngine {
    pub fn new(model: &VOAModel) -> Self {
        let mut factors = Vec::new();
        model.flatten_into(&mut factors);
        ModelEngine { model: model.clone(), factors }
    }

    pub fn model(&self) -> &VOAModel {
        &self.model
    }

    pub fn factors(&self) -> &[Arc<LatticeVoa>] {
        &self.factors
    }

    fn blocks(&self, k: u32) -> Vec<Block> {
        let mut out = Vec::new();
        let mut weights = vec![0u32; self.factors.len()];
        self.blocks_rec(0, k, &mut weights, &mut out);
        out
    }

    fn blocks_rec(&self, pos: usize, remaining: u32, weights: &mut Vec<u32>, out: &mut Vec<Block>) {
        if pos + 1 >= self.factors.len() {
            if self.factors.is_empty() {
                if remaining == 0 {
                    out.push(Block { bases: Vec::new(), len: 1 });
                }
                return;
            }
            weights[pos] = remaining;
            let bases: Vec<_> = weights.iter().zip(&self.factors).map(|(&w, f)| f.basis_shared(w)).collect();
            let len = bases.iter().map(|b| b.len() as u64).product();
            if len > 0 {
                out.push(Block { bases, len });
            }
            return;
        }
        for w in 0..=remaining {
            weights[pos] = w;
            self.blocks_rec(pos + 1, remaining - w, weights, out);
        }
    }

    /// The tuple basis of weight `k`.
    pub fn basis(&self, k: u32) -> WeightBasis {
        let blocks = self.blocks(k);
        let len = blocks.iter().map(|b| b.len).sum();
        WeightBasis { blocks, len }
    }

    /// Dual of a tuple basis state: the partner state and its coefficient.
    pub fn dual(&self, s: &[LatticeVOAState]) -> (TupleState, Rat) {
        let mut coeff = Rat::one();
        let mut partner = Vec::with_capacity(s.len());
        for (f, x) in self.factors.iter().zip(s) {
            let p = x.with_charge(x.conjugate_charge());
            coeff /= f.bilinear_states(x, &p);
            partner.push(p);
        }
        (partner, coeff)
    }

    /// Sphere correlator of tuple basis states: the product of factor correlators.
    pub fn correlator(&self, states: &[&TupleState], points: &[Rat]) -> Result<Rat> {
        let mut value = Rat::one();
        for (fi, f) in self.factors.iter().enumerate() {
            let fs: Vec<&LatticeVOAState> = states.iter().map(|s| &s[fi]).collect();
            let v = crate::correlators::wick_monomials(f, &fs, points)?;
            if v.is_zero() {
                return Ok(v);
            }
            value *= v;
        }
        Ok(value)
    }

    pub fn central_charge(&self) -> Rat {
        int(self.model.central_charge() as i64)
    }
}

/// The tuple basis of one weight, addressed by a flat index.
#[derive(Clone, Debug)]
pub struct WeightBasis {
    blocks: Vec<Block>,
    len: u64,
}

impl WeightBasis {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, mut i: u64) -> TupleState {
        for b in &self.blocks {
            if i < b.len {
                let mut out = Vec::with_capacity(b.bases.len());
                // mixed radix, last factor fastest
                let mut rest = i;
                let mut idx = vec![0usize; b.bases.len()];
                for (k, basis) in b.bases.iter().enumerate().rev() {
                    let n = basis.len() as u64;
                    idx[k] = (rest % n) as usize;
                    rest /= n;
                }
                for (k, basis) in b.bases.iter().enumerate() {
                    out.push(basis[idx[k]].clone());
                }
                return out;
            }
            i -= b.len;
        }
        panic!("basis index out of range");
    }

    pub fn iter(&self) -> impl Iterator<Item = TupleState> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}
