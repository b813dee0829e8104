//! One run of the two-way dialogue: Bob prepares a Bell pair and encodes on
//! the travel qubit, Alice encodes on it and returns it, Bob measures in the
//! Bell basis and announces the outcome. Alice then either publishes her
//! encoding (control mode) or both sides decode (message mode).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::attacks::{AttackModel, EveRecord, Leg};
use crate::error::{Error, Result};
use crate::quantum::{
    apply_pauli, bell_state_vector, compose_pauli, measure_bell, pauli_on_bell, BellLabel,
    MeasurementBranch, MessageBits, PauliEncoding, QubitSlot, TwoQubitState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunMode {
    Message,
    Control,
}

/// How Bob picks the initial Bell state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialPolicy {
    /// Uniform over the four Bell states; the choice is announced with the
    /// outcome.
    #[default]
    RandomAnnounced,
    /// Always the same, publicly known, state.
    Fixed(BellLabel),
}

impl InitialPolicy {
    pub const FIXED_PSI_MINUS: InitialPolicy = InitialPolicy::Fixed(BellLabel::PsiMinus);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BitsPolicy {
    #[default]
    UniformRandom,
    Fixed(MessageBits),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    cm_probability: f64,
    pub initial_policy: InitialPolicy,
    pub bob_bits: BitsPolicy,
    pub alice_bits: BitsPolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            cm_probability: 0.5,
            initial_policy: InitialPolicy::default(),
            bob_bits: BitsPolicy::default(),
            alice_bits: BitsPolicy::default(),
        }
    }
}

impl RunConfig {
    pub fn new(
        cm_probability: f64,
        initial_policy: InitialPolicy,
        bob_bits: BitsPolicy,
        alice_bits: BitsPolicy,
    ) -> Result<Self> {
        let mut config = Self {
            cm_probability: 0.5,
            initial_policy,
            bob_bits,
            alice_bits,
        };
        config.set_cm_probability(cm_probability)?;
        Ok(config)
    }

    /// Every run is a control run.
    pub fn control_only() -> Self {
        Self {
            cm_probability: 1.0,
            ..Self::default()
        }
    }

    pub fn cm_probability(&self) -> f64 {
        self.cm_probability
    }

    pub fn set_cm_probability(&mut self, p: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        self.cm_probability = p;
        Ok(())
    }

    pub fn with_initial(mut self, policy: InitialPolicy) -> Self {
        self.initial_policy = policy;
        self
    }

    pub fn with_bits(mut self, bob: BitsPolicy, alice: BitsPolicy) -> Self {
        self.bob_bits = bob;
        self.alice_bits = alice;
        self
    }
}

/// Full public and private record of one run. Control-only fields are
/// `None` in message mode and vice versa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub run_index: u64,
    pub mode: RunMode,
    pub initial: BellLabel,
    pub bob_enc: PauliEncoding,
    pub alice_enc: PauliEncoding,
    pub eve_records: Vec<EveRecord>,
    pub announced_outcome: BellLabel,
    pub expected_outcome: Option<BellLabel>,
    pub detected: Option<bool>,
    pub alice_decoded_bits: Option<MessageBits>,
    pub bob_decoded_bits: Option<MessageBits>,
}

/// Joint state after one step of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: String,
    pub description: String,
    pub state: TwoQubitState,
}

/// The Bell state Bob should see when nobody interferes.
pub fn expected_outcome(
    initial: BellLabel,
    bob_enc: PauliEncoding,
    alice_enc: PauliEncoding,
) -> BellLabel {
    pauli_on_bell(compose_pauli(alice_enc, bob_enc), initial)
}

/// Recovers the other party's encoding from the announced outcome, the
/// public initial state and one's own encoding.
///
/// The Pauli group acts regularly on Bell labels, so exactly one candidate
/// fits.
pub fn decode_peer(
    announced: BellLabel,
    initial: BellLabel,
    own_enc: PauliEncoding,
) -> PauliEncoding {
    PauliEncoding::ALL
        .into_iter()
        .find(|&p| pauli_on_bell(own_enc, pauli_on_bell(p, initial)) == announced)
        .expect("Pauli action on Bell labels is regular")
}

/// Bob's eavesdropping check after Alice publishes her encoding.
pub fn check_control(transcript: &ProtocolTranscript) -> Result<bool> {
    if transcript.mode != RunMode::Control {
        return Err(Error::NotControlRun);
    }
    let expected = expected_outcome(transcript.initial, transcript.bob_enc, transcript.alice_enc);
    Ok(transcript.announced_outcome != expected)
}

/// Picks one item with probability `weight(item)`. Falls back to the last
/// item when rounding leaves the draw past the cumulative total.
fn sample<'a, T, R: Rng + ?Sized>(items: &'a [T], weight: impl Fn(&T) -> f64, rng: &mut R) -> &'a T {
    debug_assert!(!items.is_empty());
    if items.len() == 1 {
        return &items[0];
    }
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for item in items {
        acc += weight(item);
        if u < acc {
            return item;
        }
    }
    items.last().unwrap()
}

fn draw_bits<R: Rng + ?Sized>(policy: BitsPolicy, rng: &mut R) -> PauliEncoding {
    match policy {
        BitsPolicy::Fixed(bits) => PauliEncoding::from_bits(bits),
        BitsPolicy::UniformRandom => PauliEncoding::ALL[rng.random_range(0..4)],
    }
}

/// Executes one run. Deterministic given the config, the attack and the
/// random source state.
pub fn run_protocol<R: Rng + ?Sized>(
    config: &RunConfig,
    attack: &dyn AttackModel,
    rng: &mut R,
    run_index: u64,
) -> ProtocolTranscript {
    run_protocol_inner(config, attack, rng, run_index, None)
}

/// Like [`run_protocol`], also returning the joint state after each step.
pub fn run_protocol_traced<R: Rng + ?Sized>(
    config: &RunConfig,
    attack: &dyn AttackModel,
    rng: &mut R,
    run_index: u64,
) -> (ProtocolTranscript, Vec<TraceStep>) {
    let mut steps = Vec::new();
    let transcript = run_protocol_inner(config, attack, rng, run_index, Some(&mut steps));
    (transcript, steps)
}

fn run_protocol_inner<R: Rng + ?Sized>(
    config: &RunConfig,
    attack: &dyn AttackModel,
    rng: &mut R,
    run_index: u64,
    mut steps: Option<&mut Vec<TraceStep>>,
) -> ProtocolTranscript {
    let mut record = |step: &str, description: String, state: &TwoQubitState| {
        if let Some(steps) = steps.as_deref_mut() {
            steps.push(TraceStep {
                step: step.to_string(),
                description,
                state: *state,
            });
        }
    };

    let initial = match config.initial_policy {
        InitialPolicy::Fixed(label) => label,
        InitialPolicy::RandomAnnounced => BellLabel::ALL[rng.random_range(0..4)],
    };
    let bob_enc = draw_bits(config.bob_bits, rng);
    let alice_enc = draw_bits(config.alice_bits, rng);
    let mut eve_records = Vec::new();

    let mut state = bell_state_vector(initial);
    record("prepare", format!("Bob prepares {initial}"), &state);

    state = apply_pauli(&state, QubitSlot::Travel, bob_enc);
    record(
        "bob-encode",
        format!("Bob encodes {} ({bob_enc}) on the travel qubit and sends it to Alice", bob_enc.bits()),
        &state,
    );

    let transit = |leg: Leg, state: &mut TwoQubitState, eve_records: &mut Vec<EveRecord>, rng: &mut R| {
        let branches = attack.intercept(leg, state);
        let branch = sample(&branches, |b| b.probability, rng);
        *state = branch.post_state;
        branch.record.clone().inspect(|r| eve_records.push(r.clone()))
    };

    if let Some(r) = transit(Leg::BtoA, &mut state, &mut eve_records, rng) {
        record(
            "eve-b2a",
            format!("Eve measures the travel qubit in {} (outcome {}) and forwards it", r.basis_description, r.outcome),
            &state,
        );
    }

    state = apply_pauli(&state, QubitSlot::Travel, alice_enc);
    record(
        "alice-encode",
        format!("Alice encodes {} ({alice_enc}) and sends the qubit back", alice_enc.bits()),
        &state,
    );

    if let Some(r) = transit(Leg::AtoB, &mut state, &mut eve_records, rng) {
        record(
            "eve-a2b",
            format!("Eve measures the returning qubit in {} (outcome {}) and forwards it", r.basis_description, r.outcome),
            &state,
        );
    }

    let branches: Vec<MeasurementBranch<BellLabel>> = measure_bell(&state);
    let announced = sample(&branches, |b| b.probability, rng).outcome;
    record(
        "bell-measure",
        format!("Bob measures in the Bell basis and announces {announced}"),
        &bell_state_vector(announced),
    );

    let mode = if rng.random_bool(config.cm_probability) {
        RunMode::Control
    } else {
        RunMode::Message
    };

    let mut transcript = ProtocolTranscript {
        run_index,
        mode,
        initial,
        bob_enc,
        alice_enc,
        eve_records,
        announced_outcome: announced,
        expected_outcome: None,
        detected: None,
        alice_decoded_bits: None,
        bob_decoded_bits: None,
    };
    match mode {
        RunMode::Control => {
            let expected = expected_outcome(initial, bob_enc, alice_enc);
            transcript.expected_outcome = Some(expected);
            transcript.detected = Some(announced != expected);
        }
        RunMode::Message => {
            transcript.alice_decoded_bits = Some(decode_peer(announced, initial, alice_enc).bits());
            transcript.bob_decoded_bits = Some(decode_peer(announced, initial, bob_enc).bits());
        }
    }
    transcript
}
