//! Detection-probability analysis: exact branch enumeration, seeded Monte
//! Carlo estimation, and the cumulative N-run comparison.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::attacks::{z_basis_disturbance, AttackModel, Leg, Legs};
use crate::error::{Error, Result};
use crate::protocol::{expected_outcome, run_protocol, RunConfig, RunMode};
use crate::quantum::{
    apply_pauli, bell_state_vector, measure_bell, BellLabel, MeasurementBranch, Parity,
    PauliEncoding, QubitSlot, TwoQubitState, NORM_TOLERANCE,
};

/// Per-run detection probability that the corrected analysis disputes.
pub const CLAIMED_PER_RUN: f64 = 0.75;

/// Trials per independently seeded Monte Carlo block.
pub const MC_BLOCK_SIZE: u64 = 4096;

/// Bell-basis measurement used by the exact engine. Swappable so checks can
/// be exercised against a deliberately broken measurement.
pub type BellMeasurement = fn(&TwoQubitState) -> Vec<MeasurementBranch<BellLabel>>;

/// Probability of each Bell outcome, serialized as a map keyed by Bell
/// token in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OutcomeDistribution([f64; 4]);

impl OutcomeDistribution {
    pub fn get(&self, label: BellLabel) -> f64 {
        self.0[label as usize]
    }

    fn add(&mut self, label: BellLabel, p: f64) {
        self.0[label as usize] += p;
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (BellLabel, f64)> + '_ {
        BellLabel::ALL.into_iter().map(|l| (l, self.get(l)))
    }

    /// Probability mass on labels of the given parity.
    pub fn mass_with_parity(&self, parity: Parity) -> f64 {
        self.iter().filter(|(l, _)| l.parity() == parity).map(|(_, p)| p).sum()
    }
}

impl Serialize for OutcomeDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        for (label, p) in self.iter() {
            map.serialize_entry(label.token(), &p)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for OutcomeDistribution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<BellLabel, f64>::deserialize(deserializer)?;
        let mut dist = OutcomeDistribution::default();
        for (label, p) in map {
            dist.add(label, p);
        }
        Ok(dist)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub initial: BellLabel,
    pub bob_enc: PauliEncoding,
    pub alice_enc: PauliEncoding,
    pub attack: String,
    pub expected_outcome: BellLabel,
    pub p_detect: f64,
    pub outcome_distribution: OutcomeDistribution,
    /// Parity shared by every pre-measurement state reachable in the run,
    /// if there is one.
    pub final_parity: Option<Parity>,
}

pub fn exact_detection_probability(
    initial: BellLabel,
    bob_enc: PauliEncoding,
    alice_enc: PauliEncoding,
    attack: &dyn AttackModel,
) -> ExactResult {
    exact_detection_probability_with(initial, bob_enc, alice_enc, attack, measure_bell)
}

/// Enumerates every path (outbound attack branch, return attack branch,
/// Bell outcome) and sums the probability of outcomes that differ from
/// the unattacked expectation.
pub fn exact_detection_probability_with(
    initial: BellLabel,
    bob_enc: PauliEncoding,
    alice_enc: PauliEncoding,
    attack: &dyn AttackModel,
    measure: BellMeasurement,
) -> ExactResult {
    let expected = expected_outcome(initial, bob_enc, alice_enc);
    let sent = apply_pauli(&bell_state_vector(initial), QubitSlot::Travel, bob_enc);

    let mut dist = OutcomeDistribution::default();
    let mut parities: Vec<Option<Parity>> = Vec::new();
    for outbound in attack.intercept(Leg::BtoA, &sent) {
        let encoded = apply_pauli(&outbound.post_state, QubitSlot::Travel, alice_enc);
        for inbound in attack.intercept(Leg::AtoB, &encoded) {
            let weight = outbound.probability * inbound.probability;
            parities.push(inbound.post_state.parity());
            for m in measure(&inbound.post_state) {
                dist.add(m.outcome, weight * m.probability);
            }
        }
    }
    let final_parity = match parities.split_first() {
        Some((first, rest)) if rest.iter().all(|p| p == first) => *first,
        _ => None,
    };

    let p_detect = BellLabel::ALL
        .into_iter()
        .filter(|&l| l != expected)
        .map(|l| dist.get(l))
        .sum();
    ExactResult {
        initial,
        bob_enc,
        alice_enc,
        attack: attack.describe(),
        expected_outcome: expected,
        p_detect,
        outcome_distribution: dist,
        final_parity,
    }
}

/// All 64 (initial, Bob encoding, Alice encoding) configurations, ordered
/// by initial, then Bob's bits, then Alice's bits.
pub fn sweep_all_configs(attack: &dyn AttackModel) -> Vec<ExactResult> {
    sweep_all_configs_with(attack, measure_bell)
}

pub fn sweep_all_configs_with(attack: &dyn AttackModel, measure: BellMeasurement) -> Vec<ExactResult> {
    let mut out = Vec::with_capacity(64);
    for initial in BellLabel::ALL {
        for bob in PauliEncoding::ALL {
            for alice in PauliEncoding::ALL {
                out.push(exact_detection_probability_with(initial, bob, alice, attack, measure));
            }
        }
    }
    out
}

/// Raw counts from a batch of simulated runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunTally {
    pub trials: u64,
    pub control_runs: u64,
    pub detections: u64,
    pub message_runs: u64,
    /// Message runs where either party decoded the wrong bits.
    pub decode_errors: u64,
    /// Announced outcomes, indexed in `BellLabel::ALL` order.
    pub outcomes: [u64; 4],
}

impl RunTally {
    fn merge(mut self, other: RunTally) -> RunTally {
        self.trials += other.trials;
        self.control_runs += other.control_runs;
        self.detections += other.detections;
        self.message_runs += other.message_runs;
        self.decode_errors += other.decode_errors;
        for (a, b) in self.outcomes.iter_mut().zip(other.outcomes) {
            *a += b;
        }
        self
    }

    pub fn outcome_count(&self, label: BellLabel) -> u64 {
        self.outcomes[label as usize]
    }
}

fn tally_block(config: &RunConfig, attack: &dyn AttackModel, seed: u64, block: u64, trials: u64) -> RunTally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let start = block * MC_BLOCK_SIZE;
    let end = (start + MC_BLOCK_SIZE).min(trials);
    let mut tally = RunTally::default();
    for run_index in start..end {
        let t = run_protocol(config, attack, &mut rng, run_index);
        tally.trials += 1;
        tally.outcomes[t.announced_outcome as usize] += 1;
        match t.mode {
            RunMode::Control => {
                tally.control_runs += 1;
                if t.detected == Some(true) {
                    tally.detections += 1;
                }
            }
            RunMode::Message => {
                tally.message_runs += 1;
                if t.alice_decoded_bits != Some(t.bob_enc.bits())
                    || t.bob_decoded_bits != Some(t.alice_enc.bits())
                {
                    tally.decode_errors += 1;
                }
            }
        }
    }
    tally
}

/// Runs `trials` protocol runs split into fixed blocks of
/// [`MC_BLOCK_SIZE`]. Block `b` draws from the ChaCha stream `b` of `seed`,
/// so the result does not depend on how blocks are spread over threads.
pub fn tally_runs(config: &RunConfig, attack: &dyn AttackModel, trials: u64, seed: u64) -> RunTally {
    let blocks = trials.div_ceil(MC_BLOCK_SIZE);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..blocks)
            .into_par_iter()
            .map(|b| tally_block(config, attack, seed, b, trials))
            .reduce(RunTally::default, RunTally::merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..blocks)
            .map(|b| tally_block(config, attack, seed, b, trials))
            .fold(RunTally::default(), RunTally::merge)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionStats {
    pub trials: u64,
    pub control_runs: u64,
    pub detections: u64,
    pub p_hat: f64,
    pub std_err: f64,
    pub seed: u64,
}

impl DetectionStats {
    fn from_tally(tally: &RunTally, seed: u64) -> Result<Self> {
        if tally.control_runs == 0 {
            return Err(Error::InsufficientSamples { trials: tally.trials });
        }
        let n = tally.control_runs as f64;
        let p_hat = tally.detections as f64 / n;
        Ok(Self {
            trials: tally.trials,
            control_runs: tally.control_runs,
            detections: tally.detections,
            p_hat,
            std_err: (p_hat * (1.0 - p_hat) / n).sqrt(),
            seed,
        })
    }
}

pub fn monte_carlo_detection(
    config: &RunConfig,
    attack: &dyn AttackModel,
    trials: u64,
    seed: u64,
) -> Result<DetectionStats> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    DetectionStats::from_tally(&tally_runs(config, attack, trials, seed), seed)
}

/// Probability of at least one detection over `n` independent control runs.
pub fn cumulative_detection(p_per_run: f64, n: u32) -> f64 {
    1.0 - (1.0 - p_per_run).powi(n as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CumulativeRow {
    pub n: u32,
    pub p_correct: f64,
    pub p_claimed: f64,
}

/// The per-run detection probability under the computational-basis attack
/// on the outbound leg, read off the exact sweep. Fails if the sweep is not
/// uniform across configurations.
pub fn per_run_detection_from_sweep() -> Result<f64> {
    let sweep = sweep_all_configs(&z_basis_disturbance(Legs::BtoA));
    let (min, max) = sweep.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
        (lo.min(r.p_detect), hi.max(r.p_detect))
    });
    if max - min > NORM_TOLERANCE {
        return Err(Error::NonUniformDetection { min, max });
    }
    Ok(round_significant(sweep[0].p_detect, 12))
}

/// Rounds to `digits` significant decimal digits. Strips the last-ulp
/// noise that `1/√2` amplitudes leave on dyadic probabilities.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Rows `n = 1..=max_n` contrasting the swept per-run probability with the
/// claimed 3/4, assuming independent runs.
pub fn claim_comparison(max_n: u32) -> Result<Vec<CumulativeRow>> {
    Ok(comparison_rows(per_run_detection_from_sweep()?, CLAIMED_PER_RUN, max_n))
}

pub fn comparison_rows(p_correct: f64, p_claimed: f64, max_n: u32) -> Vec<CumulativeRow> {
    (1..=max_n)
        .map(|n| CumulativeRow {
            n,
            p_correct: cumulative_detection(p_correct, n),
            p_claimed: cumulative_detection(p_claimed, n),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::no_attack;
    use BellLabel::*;
    use PauliEncoding::*;

    #[test]
    fn worked_example_exact() {
        let r = exact_detection_probability(PsiMinus, SigmaZ, SigmaX, &z_basis_disturbance(Legs::BtoA));
        assert!((r.p_detect - 0.5).abs() < 1e-12);
        assert!((r.outcome_distribution.get(PhiPlus) - 0.5).abs() < 1e-12);
        assert!((r.outcome_distribution.get(PhiMinus) - 0.5).abs() < 1e-12);
        assert_eq!(r.outcome_distribution.get(PsiPlus), 0.0);
        assert_eq!(r.expected_outcome, PhiPlus);
        assert_eq!(r.final_parity, Some(Parity::Even));
    }

    #[test]
    fn unattacked_is_never_detected() {
        for r in sweep_all_configs(&no_attack()) {
            assert!(r.p_detect.abs() < 1e-12, "{r:?}");
            assert!((r.outcome_distribution.get(r.expected_outcome) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_plus_initial_is_also_one_half() {
        for bob in PauliEncoding::ALL {
            for alice in PauliEncoding::ALL {
                let r = exact_detection_probability(PhiPlus, bob, alice, &z_basis_disturbance(Legs::BtoA));
                assert!((r.p_detect - 0.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn cumulative_examples() {
        assert_eq!(cumulative_detection(0.5, 1), 0.5);
        assert_eq!(cumulative_detection(0.3, 0), 0.0);
        assert_eq!(cumulative_detection(0.5, 10), 0.9990234375);
        // 1 - (1/4)^10
        assert_eq!(cumulative_detection(0.75, 10), 0.999_999_046_325_683_6);
        assert_eq!(cumulative_detection(0.75, 2), 0.9375);
    }

    #[test]
    fn comparison_rows_from_sweep() {
        let rows = claim_comparison(10).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!((rows[0].p_correct, rows[0].p_claimed), (0.5, 0.75));
        assert_eq!((rows[1].p_correct, rows[1].p_claimed), (0.75, 0.9375));
        assert_eq!(rows[9].p_correct, 0.9990234375);
    }

    #[test]
    fn monte_carlo_needs_control_runs() {
        let config = RunConfig::new(0.0, Default::default(), Default::default(), Default::default()).unwrap();
        assert_eq!(
            monte_carlo_detection(&config, &no_attack(), 100, 1),
            Err(Error::InsufficientSamples { trials: 100 })
        );
        assert_eq!(monte_carlo_detection(&config, &no_attack(), 0, 1), Err(Error::NoTrials));
    }

    #[test]
    fn monte_carlo_no_attack_is_exactly_zero() {
        let s = monte_carlo_detection(&RunConfig::control_only(), &no_attack(), 5000, 9).unwrap();
        assert_eq!(s.detections, 0);
        assert_eq!(s.p_hat, 0.0);
        assert_eq!(s.std_err, 0.0);
        assert_eq!(s.control_runs, 5000);
    }

    #[test]
    fn distribution_serializes_as_ordered_map() {
        let r = exact_detection_probability(PsiMinus, Identity, Identity, &no_attack());
        let json = serde_json::to_string(&r.outcome_distribution).unwrap();
        assert!(json.starts_with(r#"{"psi-minus":"#), "{json}");
        let back: OutcomeDistribution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r.outcome_distribution);
    }
}
