//! Error types shared across the crate.

use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The truncated theta product cannot reach the requested tolerance
    /// within the configured term cap.
    #[error("accuracy failure: {needed} product terms needed for tolerance {tolerance:.1e}, cap is {cap}")]
    Accuracy {
        needed: usize,
        cap: usize,
        tolerance: f64,
    },

    /// An argument landed on (or numerically indistinguishable from) a zero
    /// of the theta function that is about to be divided by.
    #[error("pole in {context}: theta argument {arg} is within threshold of the zero lattice")]
    Pole { context: String, arg: C64 },

    /// The exchange normalisation V(x) vanished.
    #[error("degenerate normalisation: V({arg}) = 0 in the deformed exchange")]
    DegenerateNormalization { arg: C64 },

    /// Parameter record violates a documented invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Dense operators are capped at 2^12.
    #[error("size cap: N = {0} exceeds the dense-operator cap of 12 sites")]
    SizeCap(usize),

    /// A sector spectrum was requested for an operator that does not
    /// conserve S^z.
    #[error("sector contract violated: operator does not commute with S^z (relative residual {0:.3e})")]
    SectorContract(f64),

    /// The freezing momentum-weight gate failed: w_j A_j(x*) is not
    /// j-independent, so no common velocity A* exists.
    #[error("freezing gate failure: relative spread of w_j A_j(x*) is {spread:.3e} (tolerance {tolerance:.1e})")]
    Gate { spread: f64, tolerance: f64 },

    /// A special-function evaluation overflowed double precision.
    #[error("overflow in {0}")]
    Overflow(String),

    /// Failure inside the LAPACK-backed eigensolver.
    #[error("eigensolver failure: {0}")]
    Eig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
