//! Even lattices, their theta series, and lattice vertex algebras.

pub mod enumerate;
pub mod even;
pub mod theta;
pub mod vertex;
pub mod voa;

pub use enumerate::{count_by_norm, enumerate_by_norm};
pub use even::{EvenLattice, LatticeJson};
pub use theta::{lattice_voa_graded_dim, lattice_voa_graded_dims, theta_genus1, theta_genus2, HalfIntegralMatrix};
pub use vertex::{graded_mode, vertex_mode, vertex_mode_vec};
pub use voa::{conformal_vector, lattice_bilinear_gram, Cocycle, LatticeVOAState, LatticeVector, LatticeVoa};
