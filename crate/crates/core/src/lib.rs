//! Entanglement-frustration bounds for small many-body spin Hamiltonians.

pub mod bounds;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod hamiltonian;
pub mod ising;
pub mod linalg;
pub mod perturbation;
pub mod random;
pub mod saturation;
pub mod suites;

pub use error::{Error, Result};
