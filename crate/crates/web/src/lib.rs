//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each exported function returns a JSON string. The plain-Rust versions
//! underneath are what the tests exercise.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use quantum_dialogue::analysis::{comparison_rows, per_run_detection_from_sweep, sweep_all_configs, CumulativeRow};
use quantum_dialogue::attacks::{basis_intercept, Attack, InterceptBasis, Legs};
use quantum_dialogue::protocol::{run_protocol_traced, BitsPolicy, InitialPolicy, ProtocolTranscript, RunConfig};
use quantum_dialogue::quantum::{BellLabel, MessageBits};
use quantum_dialogue::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub theta: f64,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

/// Detection probability over the 64 configurations as Eve's basis tilts
/// from Z (`theta = 0`) to the equator (`theta = pi/2`).
pub fn detection_curve(phi: f64, legs: Legs, steps: u32) -> Result<Vec<CurvePoint>> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| {
            let theta = std::f64::consts::FRAC_PI_2 * i as f64 / steps as f64;
            let basis = InterceptBasis::new(theta, phi)?;
            let sweep = sweep_all_configs(&basis_intercept(basis, legs));
            let ps = sweep.iter().map(|r| r.p_detect);
            Ok(CurvePoint {
                theta,
                min: ps.clone().fold(f64::INFINITY, f64::min),
                mean: ps.clone().sum::<f64>() / sweep.len() as f64,
                max: ps.fold(f64::NEG_INFINITY, f64::max),
            })
        })
        .collect()
}

/// Cumulative detection over `1..=max_n` runs for the swept per-run value
/// and a user-chosen claimed value.
pub fn cumulative_rows(max_n: u32, claimed_per_run: f64) -> Result<Vec<CumulativeRow>> {
    if !(0.0..=1.0).contains(&claimed_per_run) {
        return Err(quantum_dialogue::Error::InvalidProbability(claimed_per_run));
    }
    Ok(comparison_rows(per_run_detection_from_sweep()?, claimed_per_run, max_n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceView {
    pub transcript: ProtocolTranscript,
    pub steps: Vec<StepView>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepView {
    pub step: String,
    pub description: String,
    pub ket: String,
    pub probabilities: [f64; 4],
}

/// One control-mode run with the joint state after each step.
pub fn trace(initial: &str, bob: &str, alice: &str, attack: &str, legs: &str, seed: u64) -> Result<TraceView> {
    let initial: BellLabel = initial.parse()?;
    let bob: MessageBits = bob.parse()?;
    let alice: MessageBits = alice.parse()?;
    let attack = Attack::parse(attack, legs.parse()?)?;
    let config = RunConfig::control_only()
        .with_initial(InitialPolicy::Fixed(initial))
        .with_bits(BitsPolicy::Fixed(bob), BitsPolicy::Fixed(alice));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (transcript, steps) = run_protocol_traced(&config, &attack, &mut rng, 0);
    let steps = steps
        .into_iter()
        .map(|s| StepView {
            ket: s.state.to_string(),
            probabilities: s.state.amps().map(|a| a.norm_sqr()),
            step: s.step,
            description: s.description,
        })
        .collect();
    Ok(TraceView { transcript, steps })
}

fn to_js<T: Serialize>(value: Result<T>) -> std::result::Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn intercept_curve(phi: f64, legs: &str, steps: u32) -> std::result::Result<String, JsError> {
    let legs = legs.parse().map_err(|e: quantum_dialogue::Error| JsError::new(&e.to_string()))?;
    to_js(detection_curve(phi, legs, steps))
}

#[wasm_bindgen]
pub fn cumulative_curve(max_n: u32, claimed_per_run: f64) -> std::result::Result<String, JsError> {
    to_js(cumulative_rows(max_n, claimed_per_run))
}

#[wasm_bindgen]
pub fn trace_run(
    initial: &str,
    bob: &str,
    alice: &str,
    attack: &str,
    legs: &str,
    seed: u32,
) -> std::result::Result<String, JsError> {
    to_js(trace(initial, bob, alice, attack, legs, seed as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_leg_curve_is_flat() {
        for p in detection_curve(0.7, Legs::BtoA, 8).unwrap() {
            assert!((p.min - 0.5).abs() < 1e-9 && (p.max - 0.5).abs() < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn both_legs_curve_starts_at_half_and_spreads() {
        let curve = detection_curve(0.0, Legs::Both, 4).unwrap();
        assert_eq!(curve.len(), 5);
        assert!((curve[0].min - 0.5).abs() < 1e-9 && (curve[0].max - 0.5).abs() < 1e-9);
        assert!(curve.iter().any(|p| p.max - p.min > 0.1));
    }

    #[test]
    fn cumulative_rows_use_swept_value() {
        let rows = cumulative_rows(3, 0.75).unwrap();
        assert_eq!(rows[2].p_correct, 0.875);
        assert_eq!(rows[1].p_claimed, 0.9375);
        assert!(cumulative_rows(3, 1.5).is_err());
    }

    #[test]
    fn trace_reproduces_walkthrough() {
        let view = trace("psi-minus", "01", "10", "z-basis", "b2a", 3).unwrap();
        assert_eq!(view.steps.len(), 5);
        assert_eq!(view.transcript.announced_outcome.parity(), quantum_dialogue::quantum::Parity::Even);
        let json = serde_json::to_string(&view).unwrap();
        assert!(json.contains("\"step\":\"eve-b2a\""));
        assert!(trace("psi-zero", "01", "10", "none", "b2a", 0).is_err());
    }
}
