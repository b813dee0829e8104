use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bell::{bell_state_vector, BellLabel};
use super::state::{index, QubitSlot, TwoQubitState, PRUNE_THRESHOLD};

/// One outcome of a projective measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBranch<O> {
    pub outcome: O,
    pub probability: f64,
    pub post_state: TwoQubitState,
}

/// Computational-basis measurement of one qubit. Outcomes are the bit
/// values 0 and 1; post-states are renormalized.
pub fn measure_z(state: &TwoQubitState, slot: QubitSlot) -> Vec<MeasurementBranch<u8>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut branches = Vec::with_capacity(2);
    for bit in 0..2u8 {
        let mut amps = [zero; 4];
        for other in 0..2u8 {
            let k = match slot {
                QubitSlot::Home => index(bit, other),
                QubitSlot::Travel => index(other, bit),
            };
            amps[k] = state.amps()[k];
        }
        let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if probability >= PRUNE_THRESHOLD {
            branches.push(MeasurementBranch {
                outcome: bit,
                probability,
                post_state: TwoQubitState::normalized(amps),
            });
        }
    }
    branches
}

/// Bell-basis measurement. Each branch carries the canonical Bell vector
/// as its post-state.
pub fn measure_bell(state: &TwoQubitState) -> Vec<MeasurementBranch<BellLabel>> {
    BellLabel::ALL
        .into_iter()
        .filter_map(|label| {
            let post_state = bell_state_vector(label);
            let probability = post_state.inner(state).norm_sqr();
            (probability >= PRUNE_THRESHOLD).then_some(MeasurementBranch {
                outcome: label,
                probability,
                post_state,
            })
        })
        .collect()
}
