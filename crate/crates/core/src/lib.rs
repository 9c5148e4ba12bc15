//! Exact dynamics of two dipole-coupled pairs of two-level atoms.
//!
//! Four atoms `A1..A4` interact only within the pairs `(1,2)` and `(3,4)`
//! through an excitation-exchange coupling. Starting from an entangled state
//! of `(A2, A3)`, the evolution periodically moves that entanglement onto the
//! non-interacting pair `(A1, A4)`. The crate builds the Hamiltonian,
//! diagonalizes it with closed-form pair rotations, evolves states both in
//! closed form and through a generic eigendecomposition propagator, and
//! measures pairwise entanglement with the Wootters concurrence.
//!
//! Units: `ħ = 1`, energies are angular frequencies in rad/s, times in s.
// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diagonalization;
pub mod entanglement;
mod error;
pub mod evolution;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, PairLabel, StateVector, C64};
