//! Genus-g partition functions, their oracles and normalisations.

pub mod model;
pub mod sewing;

pub use model::{ModelEngine, TupleState, VOAModel, WeightBasis};
pub use sewing::{
    casimir_pair_correlator, casimir_pair_correlator_with, estimate, partition_series, PartitionRequest, Variant,
    DEFAULT_BUDGET,
};
pub mod oracles;

pub use oracles::{
    compare_partitions, compare_partitions_with, genus1_from_dims, genus1_oracle, j_coefficients_from_eta,
    moonshine_genus1, moonshine_graded_dims, normalized_partition, normalized_partition_with, rescale_genus1,
    tensor_partition_check, theta_pullback_genus1, Comparison, ComparisonReport, J_COEFFICIENTS,
};
