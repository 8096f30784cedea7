//! Simulation of two-party quantum teleportation through noisy quantum
//! channels.
//!
//! The library builds the EPR, GHZ and W teleportation circuits in
//! deferred-measurement form, evolves the shared channel state under
//! per-qubit Pauli noise in Lindblad form, and computes pointwise and
//! Bloch-averaged teleportation fidelities. Every numerical pipeline is
//! cross-checked against analytic channel matrices and fidelity formulas
//! carried as independent oracles.

pub mod checks;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod lindblad;
pub mod quadrature;
pub mod states;
pub mod teleport;

pub use error::{Error, Result};
