//! Exact-statevector simulation of 1+1D lattice field theories.
//!
//! The crate is `no_std` (with `alloc`) and covers the algorithmic pieces:
//!
//! - [`pauli`], [`state`], [`dense`]: Pauli algebra, statevector kernels and
//!   exact block-diagonal propagation.
//! - [`fermion`]: Jordan-Wigner images of fermionic operators.
//! - [`models`]: Schwinger, Thirring, deuteron and trapped-ion resource
//!   Hamiltonians plus model observables.
//! - [`evolution`]: first-order product-formula evolution and its error.
//! - [`vqe`]: ansätze, energy/variance evaluation, optimizer, mass scans.
//! - [`structure`]: sector states, two-point correlators, PDF and hadronic
//!   tensor transforms.
//! - [`thermal`]: Bloch propagation, ket/bra ensembles and quench observables.
#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dense;
pub mod error;
pub mod evolution;
pub mod fermion;
pub mod models;
pub mod pauli;
pub mod sparse;
pub mod state;
pub mod structure;
pub mod thermal;
pub mod vqe;

pub use error::{Error, Result};
pub use pauli::{multiply, Letter, PauliOperator, PauliString, PauliSum, PauliTerm, Phase};
pub use state::{apply_sum, apply_term, exp_term_apply, expectation, StateVector};
