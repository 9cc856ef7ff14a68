//! Numerical laboratory for a partially isotropic (U(1)-symmetric) elliptic
//! long-range spin chain and the dynamical elliptic spin-Ruijsenaars system
//! behind it.
//!
//! The crate builds the chain operators densely on the 2^N spin space,
//! evaluates the elliptic special functions they need, represents the
//! commuting difference operators of the parent quantum many-body system,
//! and verifies the algebraic identities tying everything together:
//! unitarity and the dynamical Yang–Baxter equation for the R-matrix,
//! commutativity of the chiral hamiltonians, Temperley–Lieb relations in
//! the short-range limit, the degeneration web down to Haldane–Shastry,
//! Inozemtsev and Heisenberg, and the freezing of the difference operators
//! onto the spin chain at classical Ruijsenaars–Schneider equilibria.
//!
//! Entry points:
//! - [`elliptic`]: theta/ρ/V and the ratio functions, with controlled
//!   truncation.
//! - [`rmatrix`]: the 4×4 dynamical R-matrix, the deformed exchange, and
//!   their degenerations.
//! - [`chain`]: N-site operators, hamiltonians, translation, magnons,
//!   spectra.
//! - [`qmbs`]: difference operators, classical equilibria, freezing.
//! - [`harness`]: the named, seeded verification suite.
//! - [`cli`]: the `ellspin` command-line front end.

pub mod chain;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod harness;
pub mod qmbs;
pub mod rmatrix;

pub use error::{Error, Result};

/// Complex double, the scalar type of everything here.
pub type C64 = num_complex::Complex64;
