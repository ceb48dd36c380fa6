//! Gauss hypergeometric function `2F1(a, b; c; z)` with two large parameters.
//!
//! The crate bundles a reference evaluator (series, analytic continuation and
//! three independent quadratures), generic steepest-descent machinery, closed-form
//! asymptotic expansions for large `(a, c)` and large `(a, b)`, the lattice-gas
//! partition functions that motivate them, and an error-measurement harness.

pub mod asym_ab;
pub mod asym_ac;
pub mod error;
pub mod errorlab;
pub mod hgf;
pub mod lattice_gas;
pub mod msd;
pub mod numerics;
pub mod quadrature;

pub use error::{Error, Result};
pub use numerics::{BigComplex, Precision};
