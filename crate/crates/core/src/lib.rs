//! Leakage-induced fidelity loss of a Josephson charge qubit.
//!
//! Three independent routes to the same quantity:
//!
//! * [`mathieu`]: characteristic values and eigenfunctions of the Mathieu
//!   equation, by truncated-recurrence eigensolving and by the order-one
//!   small-parameter series.
//! * [`charge_model`]: exact diagonalization of the truncated charge-basis
//!   Hamiltonian, used as a brute-force oracle.
//! * [`qubit_dynamics`]: explicit ideal two-level and projected "real"
//!   time evolution, compared through the overlap fidelity.
//!
//! [`leakage`] ties them together and [`cli`] exposes them as the `qleak`
//! command.

pub mod charge_model;
pub mod cli;
pub mod error;
pub mod leakage;
pub mod mathieu;
pub mod qubit_dynamics;
pub mod tridiag;

pub use error::{Error, Result};
