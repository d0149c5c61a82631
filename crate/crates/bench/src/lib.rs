//! Workloads shared by the benchmarks.

use sewing_core::correlators::PointConfig;
use sewing_core::lattice::{LatticeVOAState, LatticeVoa};
use sewing_core::partition::{PartitionRequest, VOAModel};
use sewing_core::series::rat::{int, rat};
use sewing_core::series::{QSeries, Rat};

pub fn partition_request(model: &str, genus: usize, trunc: u32) -> PartitionRequest {
    let points = match genus {
        1 => "g1a",
        2 => "g2a",
        _ => "g3a",
    };
    PartitionRequest::plain(VOAModel::parse(model).unwrap(), genus, trunc, PointConfig::builtin(points).unwrap())
}

/// Four weight-2 states of `M_2(1)` at distinct points.
pub fn four_point_heisenberg() -> (LatticeVoa, Vec<LatticeVOAState>, Vec<Rat>) {
    let voa = LatticeVoa::heisenberg(2);
    let basis = voa.basis_shared(2);
    let states = (0..4).map(|i| basis[i % basis.len()].clone()).collect();
    (voa, states, vec![int(7), int(5), int(2), rat(1, 2)])
}

/// A dense bivariate series with constant term 1.
pub fn dense_series(trunc: u32) -> QSeries {
    let exps = sewing_core::series::qseries::exponents_by_degree(2, trunc, &None);
    let terms = exps.into_iter().enumerate().map(|(i, e)| (e, rat(i as i64 % 7 - 3, 1 + i as i64 % 5)));
    let mut s = QSeries::from_terms(2, trunc, terms).unwrap();
    s.set(vec![0, 0], int(1));
    s
}
