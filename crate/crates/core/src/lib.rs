pub mod casimir_subalgebra;
pub mod correlators;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod linalg;
pub mod partition;
pub mod schottky;
pub mod series;

pub use error::{Error, Result};
