//! Exact rational arithmetic and truncated power series.

pub mod qseries;
pub mod rat;
pub mod useries;

pub use qseries::{Exponent, QSeries, QSeriesJson, TermJson};
pub use rat::Rat;
pub use useries::{lagrange_invert_mu, USeries};
