//! Independent genus-one data, normalisations and comparisons.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::model::VOAModel;
use super::sewing::{partition_series, PartitionRequest, DEFAULT_BUDGET};
use crate::correlators::PointConfig;
use crate::error::{Error, Result};
use crate::lattice::{theta_genus1, EvenLattice};
use crate::series::rat::{big, int, pow_i};
use crate::series::{lagrange_invert_mu, Exponent, QSeries, Rat, USeries};

/// `Σ_n c_n t^n` with `t = q / (w - z)^2`, as a series in `q`.
fn t_series_to_q(s: &USeries, trunc: u32, w: &Rat, z: &Rat) -> Result<QSeries> {
    let scale = pow_i(&(w - z), -2)?;
    let mut out = QSeries::zero(1, trunc);
    let mut f = Rat::one();
    for n in 0..=trunc as usize {
        out.set(vec![n as u32], s.coeff(n) * &f);
        f *= &scale;
    }
    Ok(out)
}

/// `Σ_n d_n μ(t)^n` re-expanded in `q`.
pub fn genus1_from_dims(dims: &[BigInt], trunc: u32, w: &Rat, z: &Rat) -> Result<QSeries> {
    let n = trunc as usize;
    if dims.len() <= n {
        return Err(Error::Shape(format!("need {} graded dimensions, got {}", n + 1, dims.len())));
    }
    let char_series = USeries::from_coeffs(dims[..=n].iter().map(big).collect(), n);
    let composed = char_series.compose(&lagrange_invert_mu(n))?;
    t_series_to_q(&composed, trunc, w, z)
}

/// `Tr_V μ^{L_0}` from graded dimensions alone.
pub fn genus1_oracle(model: &VOAModel, trunc: u32, w: &Rat, z: &Rat) -> Result<QSeries> {
    genus1_from_dims(&model.graded_dims(trunc as usize)?, trunc, w, z)
}

/// `Θ_L(μ(t))` re-expanded in `q`.
pub fn theta_pullback_genus1(lattice: &EvenLattice, trunc: u32, w: &Rat, z: &Rat) -> Result<QSeries> {
    let n = trunc as usize;
    let theta = theta_genus1(lattice, n)?;
    t_series_to_q(&theta.compose(&lagrange_invert_mu(n))?, trunc, w, z)
}

/// `Z_{V,g} · Z_{M(1),g}^{-c}`.
pub fn normalized_partition(model: &VOAModel, genus: usize, trunc: u32, points: &PointConfig) -> Result<QSeries> {
    normalized_partition_with(model, genus, trunc, points, DEFAULT_BUDGET)
}

pub fn normalized_partition_with(model: &VOAModel, genus: usize, trunc: u32, points: &PointConfig, budget: u64) -> Result<QSeries> {
    let z = partition_series(&PartitionRequest::plain(model.clone(), genus, trunc, points.clone()).with_budget(budget))?;
    let heis = partition_series(&PartitionRequest::plain(VOAModel::Heisenberg(1), genus, trunc, points.clone()))?;
    z.mul(&heis.inv()?.pow(model.central_charge() as i64)?)
}

/// `Z_{U⊗V,g}` through the tensor basis against `Z_{U,g} Z_{V,g}`.
pub fn tensor_partition_check(a: &VOAModel, b: &VOAModel, genus: usize, trunc: u32, points: &PointConfig) -> Result<bool> {
    let joint = VOAModel::Tensor(vec![a.clone(), b.clone()]);
    let za = partition_series(&PartitionRequest::plain(a.clone(), genus, trunc, points.clone()))?;
    let zb = partition_series(&PartitionRequest::plain(b.clone(), genus, trunc, points.clone()))?;
    let zab = partition_series(&PartitionRequest::plain(joint, genus, trunc, points.clone()))?;
    Ok(zab == za.mul(&zb)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Differ { exponent: Exponent, a: Rat, b: Rat },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub result: Comparison,
    /// Set when the two models have different central charges.
    pub warning: Option<String>,
}

/// First exponent, in degree order, where the two partition functions differ.
pub fn compare_partitions(a: &VOAModel, b: &VOAModel, genus: usize, trunc: u32, points: &PointConfig) -> Result<ComparisonReport> {
    compare_partitions_with(a, b, genus, trunc, points, DEFAULT_BUDGET)
}

pub fn compare_partitions_with(
    a: &VOAModel,
    b: &VOAModel,
    genus: usize,
    trunc: u32,
    points: &PointConfig,
    budget: u64,
) -> Result<ComparisonReport> {
    let warning = (a.central_charge() != b.central_charge())
        .then(|| format!("central charges differ: {} vs {}", a.central_charge(), b.central_charge()));
    let req = |m: &VOAModel| PartitionRequest::plain(m.clone(), genus, trunc, points.clone()).with_budget(budget);
    // check both budgets before spending time on either side
    super::sewing::estimate(&req(a))?;
    super::sewing::estimate(&req(b))?;
    let za = partition_series(&req(a))?;
    let zb = partition_series(&req(b))?;
    let result = match za.first_difference(&zb) {
        None => Comparison::Equal,
        Some((exponent, a, b)) => Comparison::Differ { exponent, a, b },
    };
    Ok(ComparisonReport { result, warning })
}

/// Coefficients `c(-1), c(0), ..., c(10)` of `j(q) = Σ c(n) q^n`.
pub const J_COEFFICIENTS: [&str; 12] = [
    "1",
    "744",
    "196884",
    "21493760",
    "864299970",
    "20245856256",
    "333202640600",
    "4252023300096",
    "44656994071935",
    "401490886656000",
    "3176440229784420",
    "22567393309593600",
];

/// `dim V♮_n` for `n <= trunc`, read off the stored `j` coefficients.
pub fn moonshine_graded_dims(trunc: usize) -> Result<Vec<BigInt>> {
    if trunc + 1 > J_COEFFICIENTS.len() {
        return Err(Error::Budget(format!("moonshine table stops at weight {}", J_COEFFICIENTS.len() - 1)));
    }
    let j: Vec<BigInt> = J_COEFFICIENTS.iter().map(|s| s.parse().expect("table entry")).collect();
    // q Σ dim V_n q^n... shifted: V_0 = 1, V_1 = c(0) - 744, V_n = c(n - 1)
    Ok((0..=trunc)
        .map(|n| match n {
            0 => j[0].clone(),
            1 => &j[1] - BigInt::from(744),
            _ => j[n].clone(),
        })
        .collect())
}

/// `j(q) = E_4(q)^3 / Δ(q)` with `Δ = q Π (1 - q^n)^24`; returns `c(-1), ..., c(trunc - 1)`.
pub fn j_coefficients_from_eta(count: usize) -> Vec<BigInt> {
    let n = count;
    let mut e4 = vec![BigInt::zero(); n];
    e4[0] = BigInt::one();
    for (k, c) in e4.iter_mut().enumerate().skip(1) {
        let sigma3: u64 = (1..=k as u64).filter(|d| (k as u64).is_multiple_of(*d)).map(|d| d * d * d).sum();
        *c = BigInt::from(240u64 * sigma3);
    }
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(n - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let e4_cubed = mul(&mul(&e4, &e4), &e4);
    // Π (1 - q^k)^24, then its inverse
    let mut eta24 = vec![BigInt::zero(); n];
    eta24[0] = BigInt::one();
    for k in 1..n {
        for _ in 0..24 {
            for i in (k..n).rev() {
                let sub = eta24[i - k].clone();
                eta24[i] -= sub;
            }
        }
    }
    let mut inv = vec![BigInt::zero(); n];
    inv[0] = BigInt::one();
    for i in 1..n {
        let s: BigInt = (1..=i).map(|k| &eta24[k] * &inv[i - k]).sum();
        inv[i] = -s;
    }
    mul(&e4_cubed, &inv)
}

/// `Z_{V♮,1}` from the stored table.
pub fn moonshine_genus1(trunc: u32, w: &Rat, z: &Rat) -> Result<QSeries> {
    genus1_from_dims(&moonshine_graded_dims(trunc as usize)?, trunc, w, z)
}

/// Coefficient-wise scaling `c_n ↦ c_n · s^n`, used to move genus-one data between point sets.
pub fn rescale_genus1(series: &QSeries, s: &Rat) -> Result<QSeries> {
    let mut out = QSeries::zero(1, series.trunc());
    for (e, c) in series.terms() {
        out.set(e.clone(), c * pow_i(s, e[0] as i64)?);
    }
    Ok(out)
}

/// Central charge as a rational.
pub fn central_charge(model: &VOAModel) -> Rat {
    int(model.central_charge() as i64)
}
