use std::fmt::Write as _;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use quantum_dialogue::analysis::{
    claim_comparison, exact_detection_probability, monte_carlo_detection, per_run_detection_from_sweep,
    round_significant, sweep_all_configs, CumulativeRow, DetectionStats, ExactResult,
};
use quantum_dialogue::attacks::{Attack, AttackKind, AttackModel, Legs};
use quantum_dialogue::protocol::{
    decode_peer, expected_outcome, run_protocol_traced, ProtocolTranscript, RunConfig, RunMode, TraceStep,
};
use quantum_dialogue::quantum::TwoQubitState;

use crate::args::{
    attack_token, bits_token, encoding, initial_token, AttackArgs, DocFormat, ExactArgs, ModeChoice,
    SimulateArgs, TableArgs, TableFormat, TraceArgs, VerifyArgs,
};
use crate::document::{params, OutputDocument, Provenance};
use crate::verify::{render, run_checks, CheckRow, VerifyOptions};

/// Rendered output of a command plus its exit status.
pub struct Outcome {
    pub body: String,
    pub status: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, status: 0 }
    }
}

const EXTENSION_NOTE: &str =
    "general-basis intercept is an extension beyond the computational-basis disturbance attack";

fn build_attack(args: &AttackArgs) -> Attack {
    match args.attack {
        AttackKind::None => Attack::None,
        AttackKind::ZBasis => Attack::ZBasis { legs: args.legs },
        AttackKind::Basis(basis) => Attack::Basis { basis, legs: args.legs },
    }
}

fn attack_provenance(attack: &Attack, seed: Option<u64>) -> Provenance {
    let mut notes = Vec::new();
    if attack.is_extension() {
        notes.push(EXTENSION_NOTE.to_string());
    }
    Provenance {
        seed,
        attack: Some(attack.describe()),
        notes,
    }
}

fn attack_params(args: &AttackArgs) -> Vec<(&'static str, Value)> {
    vec![
        ("attack", attack_token(&args.attack).into()),
        ("legs", legs_value(args.legs)),
    ]
}

fn legs_value(legs: Legs) -> Value {
    legs.token().into()
}

fn fmt_p(x: f64) -> String {
    round_significant(x, 12).to_string()
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let rows = run_checks(&VerifyOptions {
        seed: args.seed,
        ..Default::default()
    });
    let status = if rows.iter().all(|r| r.passed) { 0 } else { 1 };
    let body = match args.format {
        DocFormat::Text => render(&rows),
        DocFormat::Json => OutputDocument::<Vec<CheckRow>>::new(
            "verify",
            params([("seed", Value::from(args.seed))]),
            rows,
            Provenance {
                seed: Some(args.seed),
                attack: Some(Attack::ZBasis { legs: Legs::BtoA }.describe()),
                notes: vec![],
            },
        )
        .to_json(),
    };
    Outcome { body, status }
}

pub fn exact(args: &ExactArgs) -> Outcome {
    let attack = build_attack(&args.attack);
    let results: Vec<ExactResult> = if args.sweep {
        sweep_all_configs(&attack)
    } else {
        // clap enforces presence when --sweep is absent
        let (initial, bob, alice) = (args.initial.unwrap(), args.bob.unwrap(), args.alice.unwrap());
        vec![exact_detection_probability(initial, encoding(bob), encoding(alice), &attack)]
    };
    let body = match args.format {
        DocFormat::Json => {
            let mut p = vec![("sweep", Value::from(args.sweep))];
            if !args.sweep {
                p.push(("initial", args.initial.unwrap().token().into()));
                p.push(("bob", args.bob.unwrap().to_string().into()));
                p.push(("alice", args.alice.unwrap().to_string().into()));
            }
            p.extend(attack_params(&args.attack));
            OutputDocument::new("exact", params(p), results, attack_provenance(&attack, None)).to_json()
        }
        DocFormat::Text => render_exact(&results, &attack),
    };
    Outcome::ok(body)
}

fn render_exact(results: &[ExactResult], attack: &Attack) -> String {
    let mut out = format!("attack: {}\n", attack.describe());
    if attack.is_extension() {
        let _ = writeln!(out, "note: {EXTENSION_NOTE}");
    }
    let _ = writeln!(
        out,
        "{:<10} {:>3} {:>5} {:>8} {:>10}  distribution",
        "initial", "bob", "alice", "expected", "p_detect"
    );
    for r in results {
        let dist: Vec<String> = r
            .outcome_distribution
            .iter()
            .filter(|(_, p)| *p > 0.0)
            .map(|(l, p)| format!("{l}:{}", fmt_p(p)))
            .collect();
        let _ = writeln!(
            out,
            "{:<10} {:>3} {:>5} {:>8} {:>10}  {{{}}}",
            r.initial.token(),
            r.bob_enc.bits(),
            r.alice_enc.bits(),
            r.expected_outcome.to_string(),
            fmt_p(r.p_detect),
            dist.join(", ")
        );
    }
    if results.len() > 1 {
        let (lo, hi) = results.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.p_detect), hi.max(r.p_detect))
        });
        let _ = writeln!(out, "{} configurations, p_detect in [{}, {}]", results.len(), fmt_p(lo), fmt_p(hi));
    }
    out
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

pub fn simulate(args: &SimulateArgs) -> Result<Outcome> {
    let attack = build_attack(&args.attack);
    let seed = resolve_seed(args.seed);
    let config = RunConfig::new(args.cm_prob, args.initial, args.bob, args.alice)?;
    let compute = || monte_carlo_detection(&config, &attack, args.runs, seed);
    let stats: DetectionStats = match args.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .context("building worker pool")?
            .install(compute),
        None => compute(),
    }
    .context("simulation produced no control-mode runs to estimate from")?;

    let body = match args.format {
        DocFormat::Json => {
            let mut p: Vec<(&str, Value)> = vec![
                ("runs", args.runs.into()),
                ("cm_prob", args.cm_prob.into()),
                ("seed", seed.into()),
                ("initial", initial_token(args.initial).into()),
                ("bob", bits_token(args.bob).into()),
                ("alice", bits_token(args.alice).into()),
            ];
            p.extend(attack_params(&args.attack));
            OutputDocument::new("simulate", params(p), stats, attack_provenance(&attack, Some(seed))).to_json()
        }
        DocFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "attack:       {}", attack.describe());
            if attack.is_extension() {
                let _ = writeln!(out, "note:         {EXTENSION_NOTE}");
            }
            let _ = writeln!(out, "seed:         {seed}");
            let _ = writeln!(out, "runs:         {}", stats.trials);
            let _ = writeln!(out, "control runs: {}", stats.control_runs);
            let _ = writeln!(out, "detections:   {}", stats.detections);
            let _ = writeln!(out, "p_hat:        {:.6} ± {:.6}", stats.p_hat, stats.std_err);
            out
        }
    };
    Ok(Outcome::ok(body))
}

/// A transcript with the joint state after each step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    #[serde(flatten)]
    pub transcript: ProtocolTranscript,
    pub steps: Vec<StepView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepView {
    pub step: String,
    pub description: String,
    pub ket: String,
    pub state: TwoQubitState,
}

impl From<TraceStep> for StepView {
    fn from(s: TraceStep) -> Self {
        Self {
            ket: s.state.to_string(),
            step: s.step,
            description: s.description,
            state: s.state,
        }
    }
}

/// Fills in the fields the other mode would have produced, so a single
/// trace shows both the control verdict and the decoded messages.
fn annotate_both_modes(t: &mut ProtocolTranscript) {
    t.expected_outcome
        .get_or_insert(expected_outcome(t.initial, t.bob_enc, t.alice_enc));
    let expected = t.expected_outcome.unwrap();
    t.detected.get_or_insert(t.announced_outcome != expected);
    t.alice_decoded_bits
        .get_or_insert(decode_peer(t.announced_outcome, t.initial, t.alice_enc).bits());
    t.bob_decoded_bits
        .get_or_insert(decode_peer(t.announced_outcome, t.initial, t.bob_enc).bits());
}

pub fn trace_record(args: &TraceArgs, seed: u64) -> TraceRecord {
    let attack = build_attack(&args.attack);
    let cm = match args.mode {
        ModeChoice::Control => 1.0,
        ModeChoice::Message => 0.0,
        ModeChoice::Random => 0.5,
    };
    let config = RunConfig::new(cm, args.initial, args.bob, args.alice).expect("mode maps to a valid probability");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut transcript, steps) = run_protocol_traced(&config, &attack, &mut rng, 0);
    annotate_both_modes(&mut transcript);
    TraceRecord {
        transcript,
        steps: steps.into_iter().map(StepView::from).collect(),
    }
}

pub fn trace(args: &TraceArgs) -> Outcome {
    let attack = build_attack(&args.attack);
    let seed = resolve_seed(args.seed);
    let record = trace_record(args, seed);
    let body = match args.format {
        DocFormat::Json => {
            let mode = match args.mode {
                ModeChoice::Control => "control",
                ModeChoice::Message => "message",
                ModeChoice::Random => "random",
            };
            let mut p: Vec<(&str, Value)> = vec![
                ("initial", initial_token(args.initial).into()),
                ("bob", bits_token(args.bob).into()),
                ("alice", bits_token(args.alice).into()),
                ("mode", mode.into()),
                ("seed", seed.into()),
            ];
            p.extend(attack_params(&args.attack));
            OutputDocument::new("trace", params(p), vec![record], attack_provenance(&attack, Some(seed))).to_json()
        }
        DocFormat::Text => render_trace(&record, &attack, seed),
    };
    Outcome::ok(body)
}

fn render_trace(record: &TraceRecord, attack: &Attack, seed: u64) -> String {
    let t = &record.transcript;
    let mode = match t.mode {
        RunMode::Control => "control",
        RunMode::Message => "message",
    };
    let mut out = String::new();
    let _ = writeln!(out, "seed {seed}, {mode} mode, attack {}", attack.describe());
    if attack.is_extension() {
        let _ = writeln!(out, "note: {EXTENSION_NOTE}");
    }
    for (i, s) in record.steps.iter().enumerate() {
        let _ = writeln!(out, "{}. {}", i + 1, s.description);
        let _ = writeln!(out, "   state: {}", s.ket);
    }
    let expected = t.expected_outcome.expect("trace transcripts are annotated");
    let _ = writeln!(out, "announced outcome: {}", t.announced_outcome);
    let _ = writeln!(out, "expected outcome:  {expected}");
    let _ = writeln!(out, "detected: {}", t.detected.unwrap_or(false));
    let _ = writeln!(
        out,
        "Alice decodes Bob's bits as {} (sent {}), Bob decodes Alice's bits as {} (sent {})",
        t.alice_decoded_bits.map(|b| b.to_string()).unwrap_or_default(),
        t.bob_enc.bits(),
        t.bob_decoded_bits.map(|b| b.to_string()).unwrap_or_default(),
        t.alice_enc.bits()
    );
    out
}

pub fn table(args: &TableArgs) -> Result<Outcome> {
    let per_run = per_run_detection_from_sweep()?;
    let rows: Vec<CumulativeRow> = claim_comparison(args.max_n)?;
    let body = match args.format {
        TableFormat::Csv => {
            let mut out = String::from("n,p_correct,p_claimed\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{}", r.n, fmt_p(r.p_correct), fmt_p(r.p_claimed));
            }
            out
        }
        TableFormat::Json => OutputDocument::new(
            "table",
            params([("max_n", Value::from(args.max_n))]),
            rows,
            Provenance {
                seed: None,
                attack: Some(Attack::ZBasis { legs: Legs::BtoA }.describe()),
                notes: vec![format!("per-run detection {} read from the exact sweep", fmt_p(per_run))],
            },
        )
        .to_json(),
        TableFormat::Text => {
            let mut out = format!("per-run detection from the exact sweep: {}\n", fmt_p(per_run));
            let _ = writeln!(out, "{:>4}  {:>16}  {:>16}", "n", "p_correct", "p_claimed");
            for r in &rows {
                let _ = writeln!(out, "{:>4}  {:>16}  {:>16}", r.n, fmt_p(r.p_correct), fmt_p(r.p_claimed));
            }
            out
        }
    };
    Ok(Outcome::ok(body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{Cli, Command};
    use clap::Parser;

    fn trace_args(argv: &[&str]) -> TraceArgs {
        let mut full = vec!["qdialogue", "trace"];
        full.extend_from_slice(argv);
        match Cli::parse_from(full).command {
            Command::Trace(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn no_attack_walkthrough() {
        let args = trace_args(&["--initial", "psi-minus", "--bob", "01", "--alice", "00", "--attack", "none"]);
        let r = trace_record(&args, 0);
        assert_eq!(r.transcript.announced_outcome.token(), "psi-plus");
        assert_eq!(r.transcript.detected, Some(false));
        assert_eq!(r.steps.len(), 4);
    }

    #[test]
    fn annotated_message_run_keeps_mode() {
        let args = trace_args(&["--attack", "none", "--mode", "message"]);
        let r = trace_record(&args, 1);
        assert_eq!(r.transcript.mode, RunMode::Message);
        assert_eq!(r.transcript.alice_decoded_bits, Some(r.transcript.bob_enc.bits()));
        assert_eq!(r.transcript.detected, Some(false));
    }

    #[test]
    fn exact_text_lists_distribution() {
        let attack = Attack::ZBasis { legs: Legs::BtoA };
        let text = render_exact(
            &[exact_detection_probability(
                quantum_dialogue::quantum::BellLabel::PsiMinus,
                quantum_dialogue::quantum::PauliEncoding::SigmaZ,
                quantum_dialogue::quantum::PauliEncoding::SigmaX,
                &attack,
            )],
            &attack,
        );
        assert!(text.contains("{phi-:0.5, phi+:0.5}"), "{text}");
    }
}
