//! Entanglement analysis for finite-dimensional multi-subsystem quantum
//! systems built from commuting observables.
//!
//! The crate takes two sets of commuting Hermitian observables (an A-set
//! and a B-set declared in a scenario file), verifies that each forms a
//! complete set of commuting observables, builds the grid of commutators
//! `C_ij = i[B_i, A_j]`, and evaluates an entanglement criterion on every
//! simultaneous A-eigenstate. Each verdict is cross-checked against two
//! independent oracles: the exact joint distribution of B-measurement
//! outcomes (dependence via mutual information) and the Schmidt rank across
//! a declared bipartition.
//!
//! Modules:
//! - [`numerics`]: dense complex matrices, kets, the Jacobi eigensolver and
//!   the tolerance policy everything else refers to.
//! - [`opexpr`]: the operator-expression mini-language, spin generators,
//!   tensor embedding and scenario files.
//! - [`csco`]: mutual-commutation checks, simultaneous eigenbases by
//!   eigenspace refinement, completeness verdicts.
//! - [`criterion`]: the commutator matrix, conditions (a)/(b)/(b'),
//!   outcome distributions, oracles, and per-state reports.

pub mod criterion;
pub mod csco;
pub mod error;
pub mod numerics;
pub mod opexpr;

pub use error::{Error, Result};
