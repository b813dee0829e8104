//! Exact two-qubit pure-state engine.
//!
//! Bob keeps the home qubit and sends the travel qubit to Alice. Everything
//! here is a pure function on immutable values.

mod bell;
mod measure;
mod pauli;
mod state;

pub use bell::{bell_state_vector, parity_of, BellLabel};
pub use measure::{measure_bell, measure_z, MeasurementBranch};
pub use pauli::{apply_pauli, compose_pauli, pauli_on_bell, MessageBits, PauliEncoding};
pub use state::{
    states_equal_up_to_phase, ComplexAmp, Parity, QubitSlot, TwoQubitState, NORM_TOLERANCE,
    PRUNE_THRESHOLD,
};
