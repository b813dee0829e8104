//! Simulation and analysis of the entanglement-based quantum dialogue
//! protocol under intercept-measure attacks on the travel qubit.
//!
//! The crate is organized bottom-up:
//!
//! - [`quantum`]: exact two-qubit pure states, Pauli encodings, Z and Bell
//!   measurements, and the Pauli-on-Bell lookup algebra.
//! - [`attacks`]: eavesdropper models as measurement-branch transformers.
//! - [`protocol`]: one run of the dialogue, with decoding and the control
//!   check.
//! - [`analysis`]: exact detection probabilities, Monte Carlo estimates and
//!   the cumulative comparison table.

pub mod analysis;
pub mod attacks;
pub mod error;
pub mod protocol;
pub mod quantum;

pub use error::{Error, Result};
