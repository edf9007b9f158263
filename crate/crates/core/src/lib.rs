//! Identical particles on finite-dimensional Hilbert spaces.
//!
//! - [`hilbert`]: dense states, operators, tensor products, seeded sampling.
//! - [`permutation`]: the permutator Π, `P_σ`, symmetrizers and their axioms.
//! - [`observables`]: differentiating states, state-sensitive observables and
//!   the identical/different equivalence check with its overlap scaling.
//! - [`counting`]: exact microstate counts, the Gibbs `N!` and extensivity.
//! - [`scenarios`]: Gaussian packets, double well, spin, singlet.

pub mod counting;
pub mod error;
pub mod hilbert;
pub mod observables;
pub mod permutation;
pub mod scenarios;

pub use error::{Error, Result};
pub use hilbert::{Operator, RandomSpec, StateVector, C64};
pub use permutation::{Permutation, SymmetryClass};
