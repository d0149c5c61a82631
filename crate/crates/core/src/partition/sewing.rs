//! Partition functions as sums of Casimir contractions of sphere correlators.
//!
//! The coefficient of `q_1^{n_1} ... q_g^{n_g}` is the vacuum correlator of
//! `γ_{n_1}(w_1, z_1) ... γ_{n_g}(w_g, z_g)`, where `γ_n(w, z) = Σ Y(v, w) Y(v^∨, z)`
//! runs over a basis of `V_n` and its dual basis.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::model::{ModelEngine, TupleState, VOAModel, WeightBasis};
use crate::correlators::PointConfig;
use crate::error::{Error, Result};
use crate::series::qseries::exponents_by_degree;
use crate::series::rat::display;
use crate::series::{Exponent, QSeries, Rat};

/// Default cap on Wick evaluations for a single coefficient.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    /// The `i`-th separating degeneration: handles `1..=i` and `i+1..=g` are
    /// joined through one extra Casimir insertion at `(w, z)` weighted by `q^k`,
    /// with `k <= k_trunc`.
    Separating { i: usize, w: Rat, z: Rat, k_trunc: u32 },
}

#[derive(Clone, Debug)]
pub struct PartitionRequest {
    pub model: VOAModel,
    pub genus: usize,
    /// Maximum total degree.
    pub trunc: u32,
    pub points: PointConfig,
    pub variant: Variant,
    /// Maximum number of Wick evaluations per coefficient.
    pub budget: u64,
    /// Evaluate on the calling thread only.
    pub serial: bool,
}

impl PartitionRequest {
    pub fn plain(model: VOAModel, genus: usize, trunc: u32, points: PointConfig) -> Self {
        PartitionRequest { model, genus, trunc, points, variant: Variant::Plain, budget: DEFAULT_BUDGET, serial: false }
    }

    pub fn separating(model: VOAModel, genus: usize, trunc: u32, points: PointConfig, i: usize, w: Rat, z: Rat, k_trunc: u32) -> Self {
        PartitionRequest {
            model,
            genus,
            trunc,
            points,
            variant: Variant::Separating { i, w, z, k_trunc },
            budget: DEFAULT_BUDGET,
            serial: false,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_serial(mut self, serial: bool) -> Self {
        self.serial = serial;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.genus == 0 {
            return Err(Error::Invalid("genus must be at least 1".into()));
        }
        if self.points.genus() != self.genus {
            return Err(Error::Invalid(format!(
                "genus {} needs {} points, got {}",
                self.genus,
                2 * self.genus,
                self.points.points().len()
            )));
        }
        if self.budget == 0 {
            return Err(Error::Invalid("budget must be positive".into()));
        }
        if let Variant::Separating { i, w, z, .. } = &self.variant {
            if *i < 1 || *i > self.genus / 2 {
                return Err(Error::Invalid(format!("separating index {i} outside 1..={}", self.genus / 2)));
            }
            if w == z || self.points.points().iter().any(|p| p == w || p == z) {
                return Err(Error::Pole("separating points must differ from each other and the handle points".into()));
            }
        }
        Ok(())
    }
}

/// Sum over dual-basis tuples for the given handles, with extra fixed insertions.
///
/// `points` holds `w_a, z_a` for each handle followed by one point per fixed state.
fn contract(
    engine: &ModelEngine,
    bases: &[WeightBasis],
    points: &[Rat],
    fixed: &[&TupleState],
    serial: bool,
) -> Result<Rat> {
    let total: u64 = bases.iter().map(WeightBasis::len).product();
    let eval = |flat: u64| -> Result<Rat> {
        let mut idx = vec![0u64; bases.len()];
        let mut rest = flat;
        for (a, b) in bases.iter().enumerate().rev() {
            idx[a] = rest % b.len();
            rest /= b.len();
        }
        let mut owned = Vec::with_capacity(2 * bases.len());
        let mut coeff = Rat::one();
        for (b, &i) in bases.iter().zip(&idx) {
            let v = b.get(i);
            let (d, c) = engine.dual(&v);
            coeff *= c;
            owned.push(v);
            owned.push(d);
        }
        let mut states: Vec<&TupleState> = owned.iter().collect();
        states.extend_from_slice(fixed);
        Ok(engine.correlator(&states, points)? * coeff)
    };
    if total == 0 {
        return Ok(Rat::zero());
    }
    if serial {
        (0..total).map(eval).try_fold(Rat::zero(), |acc, v| Ok(acc + v?))
    } else {
        (0..total).into_par_iter().map(eval).try_reduce(Rat::zero, |a, b| Ok(a + b))
    }
}

/// `(Ω, γ_{n_1}(w_1, z_1) ... γ_{n_g}(w_g, z_g) Ω)`.
pub fn casimir_pair_correlator(engine: &ModelEngine, ns: &[u32], points: &PointConfig) -> Result<Rat> {
    casimir_pair_correlator_with(engine, ns, points, false)
}

pub fn casimir_pair_correlator_with(engine: &ModelEngine, ns: &[u32], points: &PointConfig, serial: bool) -> Result<Rat> {
    if ns.len() != points.genus() {
        return Err(Error::Shape(format!("{} weights for {} handles", ns.len(), points.genus())));
    }
    let bases: Vec<WeightBasis> = ns.iter().map(|&n| engine.basis(n)).collect();
    contract(engine, &bases, points.points(), &[], serial)
}

fn product(dims: &[BigInt], ns: &[u32]) -> BigInt {
    ns.iter().map(|&n| dims[n as usize].clone()).product()
}

/// Number of Wick evaluations needed for one coefficient.
fn cost(req: &PartitionRequest, dims: &[BigInt], e: &[u32]) -> BigInt {
    match &req.variant {
        Variant::Plain => product(dims, e),
        Variant::Separating { i, .. } => {
            let g = req.genus;
            let k = e[g] as usize;
            &dims[k] * (product(dims, &e[..*i]) + product(dims, &e[*i..g]))
        }
    }
}

fn series_shape(req: &PartitionRequest) -> Result<QSeries> {
    match &req.variant {
        Variant::Plain => Ok(QSeries::zero(req.genus, req.trunc)),
        Variant::Separating { k_trunc, .. } => {
            let mut caps = vec![req.trunc; req.genus];
            caps.push(*k_trunc);
            QSeries::zero(req.genus + 1, req.trunc).with_caps(caps)
        }
    }
}

/// Checks every coefficient of the request against its budget without evaluating anything.
pub fn estimate(req: &PartitionRequest) -> Result<Vec<(Exponent, BigInt)>> {
    req.validate()?;
    let shape = series_shape(req)?;
    let dims = req.model.graded_dims(req.trunc as usize)?;
    let exps = exponents_by_degree(shape.vars(), shape.trunc(), &shape.caps().map(<[u32]>::to_vec));
    let mut out = Vec::with_capacity(exps.len());
    for e in exps {
        let c = cost(req, &dims, &e);
        if c > BigInt::from(req.budget) {
            return Err(Error::Budget(format!(
                "coefficient {:?} of {} needs {} Wick evaluations, over the budget of {}",
                e, req.model, c, req.budget
            )));
        }
        out.push((e, c));
    }
    Ok(out)
}

/// The truncated genus-`g` partition function at the request's points.
pub fn partition_series(req: &PartitionRequest) -> Result<QSeries> {
    let plan = estimate(req)?;
    let engine = ModelEngine::new(&req.model);
    let mut out = series_shape(req)?;
    let eval = |(e, _): &(Exponent, BigInt)| -> Result<(Exponent, Rat)> {
        let v = match &req.variant {
            Variant::Plain => casimir_pair_correlator_with(&engine, e, &req.points, req.serial)?,
            Variant::Separating { i, w, z, .. } => separating_coefficient(&engine, req, *i, w, z, e)?,
        };
        Ok((e.clone(), v))
    };
    let values: Vec<(Exponent, Rat)> = if req.serial {
        plan.iter().map(eval).collect::<Result<_>>()?
    } else {
        plan.par_iter().map(eval).collect::<Result<_>>()?
    };
    for (e, v) in values {
        out.set(e, v);
    }
    if !out.constant_term().is_one() {
        return Err(Error::Invariant(format!(
            "partition series has constant term {}",
            display(&out.constant_term())
        )));
    }
    Ok(out)
}

fn separating_coefficient(engine: &ModelEngine, req: &PartitionRequest, i: usize, w: &Rat, z: &Rat, e: &[u32]) -> Result<Rat> {
    let g = req.genus;
    let k = e[g];
    let left_bases: Vec<WeightBasis> = e[..i].iter().map(|&n| engine.basis(n)).collect();
    let right_bases: Vec<WeightBasis> = e[i..g].iter().map(|&n| engine.basis(n)).collect();
    let mut left_points = req.points.handles(0, i).points().to_vec();
    left_points.push(w.clone());
    let mut right_points = req.points.handles(i, g).points().to_vec();
    right_points.push(z.clone());
    let middle = engine.basis(k);
    let term = |idx: u64| -> Result<Rat> {
        let v = middle.get(idx);
        let (d, c) = engine.dual(&v);
        let left = contract(engine, &left_bases, &left_points, &[&v], true)?;
        if left.is_zero() {
            return Ok(left);
        }
        let right = contract(engine, &right_bases, &right_points, &[&d], true)?;
        Ok(left * right * c)
    };
    if req.serial {
        (0..middle.len()).map(term).try_fold(Rat::zero(), |acc, v| Ok(acc + v?))
    } else {
        (0..middle.len()).into_par_iter().map(term).try_reduce(Rat::zero, |a, b| Ok(a + b))
    }
}

/// Total Wick evaluations of a plan, for reporting.
pub fn plan_size(plan: &[(Exponent, BigInt)]) -> u64 {
    plan.iter().map(|(_, c)| c.to_u64().unwrap_or(u64::MAX)).fold(0u64, u64::saturating_add)
}
