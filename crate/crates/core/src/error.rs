use thiserror::Error;

/// Errors raised by the engine.
///
/// Variants are grouped so that front ends can map them onto exit codes:
/// shape/usage problems, budget overruns, mathematical domain violations and
/// broken internal invariants.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("series is not invertible: constant term is zero")]
    NotInvertible,
    #[error("composition requires an inner series with zero constant term")]
    Composition,
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("coincident insertion points: {0}")]
    Pole(String),
    #[error("point configuration outside the convergence domain: {0}")]
    Domain(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("degenerate Moebius map: {0}")]
    Degenerate(String),
    #[error("map is not loxodromic: {0}")]
    NotLoxodromic(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by the mathematics of the request rather than
    /// its syntax.
    pub fn is_math_domain(&self) -> bool {
        matches!(
            self,
            Error::NotInvertible
                | Error::Composition
                | Error::Lattice(_)
                | Error::Pole(_)
                | Error::Domain(_)
                | Error::Degenerate(_)
                | Error::NotLoxodromic(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
