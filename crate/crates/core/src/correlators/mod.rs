//! Sphere correlators: the Wick engine, the mode-expansion oracle and point configurations.

pub mod oracle;
pub mod points;
pub mod wick;

pub use oracle::{mode_oracle, monomial_insertions, two_point_check, OracleValue};
pub use points::{check_ordered, PointConfig, PointConfigJson};
pub use wick::{wick_correlator, wick_monomials, Insertion};
