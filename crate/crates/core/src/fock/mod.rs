//! Heisenberg Fock spaces: bases, forms, Virasoro modes and quasi-primaries.

pub mod heisenberg;
pub mod modes;
pub mod space;
pub mod state;

pub use heisenberg::{
    basis, bilinear_form, colored_partition_numbers, dual_basis, heis_mode_apply, qp_subspace,
    scalar_product, virasoro_mode, Heisenberg,
};
pub use space::{dual_of_subspace, quasi_primary, DualPairing, GradedSpace};
pub use state::{FockState, GradedVector, LinComb};
