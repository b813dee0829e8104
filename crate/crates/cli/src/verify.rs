//! The claim-reproduction suite behind `qdialogue verify`.

use serde::{Deserialize, Serialize};

use quantum_dialogue::analysis::{
    claim_comparison, cumulative_detection, monte_carlo_detection, round_significant,
    sweep_all_configs_with, BellMeasurement, ExactResult, CLAIMED_PER_RUN,
};
use quantum_dialogue::attacks::{no_attack, z_basis_disturbance, Attack, Legs};
use quantum_dialogue::protocol::{decode_peer, expected_outcome, RunConfig};
use quantum_dialogue::quantum::{
    apply_pauli, bell_state_vector, compose_pauli, measure_bell, pauli_on_bell,
    states_equal_up_to_phase, BellLabel, PauliEncoding, QubitSlot,
};

/// Tolerance on exact probabilities.
pub const EXACT_TOL: f64 = 1e-9;
/// Half-width of the Monte Carlo acceptance band around 1/2.
pub const MC_BAND: f64 = 0.006;
pub const MC_TRIALS: u64 = 100_000;
pub const BASELINE_TRIALS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub observed: String,
    pub expected: String,
    pub passed: bool,
    /// First failing configuration, when there is one.
    pub detail: Option<String>,
}

impl CheckRow {
    fn new(name: &str, observed: impl ToString, expected: impl ToString, failure: Option<String>) -> Self {
        Self {
            name: name.to_string(),
            observed: observed.to_string(),
            expected: expected.to_string(),
            passed: failure.is_none(),
            detail: failure,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub measure: BellMeasurement,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            measure: measure_bell,
        }
    }
}

fn describe(r: &ExactResult) -> String {
    format!(
        "initial={} bob={} alice={}",
        r.initial.token(),
        r.bob_enc.bits(),
        r.alice_enc.bits()
    )
}

fn fmt_p(x: f64) -> String {
    round_significant(x, 12).to_string()
}

fn uniform_sweep(name: &str, attack: &Attack, target: f64, options: &VerifyOptions) -> CheckRow {
    let sweep = sweep_all_configs_with(attack, options.measure);
    let mut observed: Vec<String> = sweep.iter().map(|r| fmt_p(r.p_detect)).collect();
    observed.sort();
    observed.dedup();
    let failure = sweep.iter().find(|r| (r.p_detect - target).abs() > EXACT_TOL).map(|r| {
        format!("{}: p_detect={} expected {}", describe(r), fmt_p(r.p_detect), fmt_p(target))
    });
    CheckRow::new(name, observed.join(","), fmt_p(target), failure)
}

fn parity_exclusion(options: &VerifyOptions) -> CheckRow {
    let mut worst: f64 = 0.0;
    let mut failure = None;
    for attack in [z_basis_disturbance(Legs::BtoA), z_basis_disturbance(Legs::Both), no_attack()] {
        for r in sweep_all_configs_with(&attack, options.measure) {
            let Some(parity) = r.final_parity else {
                failure.get_or_insert_with(|| format!("{}: final state has mixed parity", describe(&r)));
                continue;
            };
            let forbidden = r.outcome_distribution.total() - r.outcome_distribution.mass_with_parity(parity);
            worst = worst.max(forbidden);
            if forbidden > 1e-12 {
                failure.get_or_insert_with(|| {
                    format!("{} ({}): {} mass on wrong-parity outcomes", describe(&r), r.attack, forbidden)
                });
            }
        }
    }
    CheckRow::new("parity exclusion (exact)", format!("max forbidden mass {worst}"), "0", failure)
}

fn table_vs_vectors() -> CheckRow {
    let mut failure = None;
    let mut matched = 0;
    for p in PauliEncoding::ALL {
        for l in BellLabel::ALL {
            let moved = apply_pauli(&bell_state_vector(l), QubitSlot::Travel, p);
            if states_equal_up_to_phase(&moved, &bell_state_vector(pauli_on_bell(p, l))) {
                matched += 1;
            } else {
                failure.get_or_insert_with(|| format!("{p} on {l}"));
            }
        }
    }
    CheckRow::new("Pauli-on-Bell table vs vectors", format!("{matched}/16"), "16/16", failure)
}

fn group_laws() -> CheckRow {
    let all = PauliEncoding::ALL;
    let mut failure = None;
    for a in all {
        if compose_pauli(a, a) != PauliEncoding::Identity || compose_pauli(PauliEncoding::Identity, a) != a {
            failure.get_or_insert_with(|| format!("identity/inverse fails for {a}"));
        }
        for b in all {
            if compose_pauli(a, b) != compose_pauli(b, a) {
                failure.get_or_insert_with(|| format!("{a}, {b} do not commute"));
            }
            for c in all {
                if compose_pauli(a, compose_pauli(b, c)) != compose_pauli(compose_pauli(a, b), c) {
                    failure.get_or_insert_with(|| format!("associativity fails for {a}, {b}, {c}"));
                }
            }
        }
    }
    let observed = if failure.is_none() { "all hold" } else { "violated" };
    CheckRow::new("Klein four-group laws", observed, "all hold", failure)
}

fn dense_coding() -> CheckRow {
    let mut ok = 0;
    let mut failure = None;
    for initial in BellLabel::ALL {
        for bob in PauliEncoding::ALL {
            for alice in PauliEncoding::ALL {
                let announced = expected_outcome(initial, bob, alice);
                if decode_peer(announced, initial, alice) == bob && decode_peer(announced, initial, bob) == alice {
                    ok += 1;
                } else {
                    failure.get_or_insert_with(|| {
                        format!("initial={} bob={} alice={}", initial.token(), bob.bits(), alice.bits())
                    });
                }
            }
        }
    }
    CheckRow::new("dense-coding round trip", format!("{ok}/64"), "64/64", failure)
}

fn monte_carlo(options: &VerifyOptions) -> Vec<CheckRow> {
    let attack = z_basis_disturbance(Legs::BtoA);
    let mut rows = Vec::new();
    match monte_carlo_detection(&RunConfig::control_only(), &attack, MC_TRIALS, options.seed) {
        Ok(stats) => {
            let failure = ((stats.p_hat - 0.5).abs() > MC_BAND)
                .then(|| format!("seed={}: p_hat={} outside 0.5±{MC_BAND}", options.seed, stats.p_hat));
            rows.push(CheckRow::new(
                "Monte Carlo detection (z-basis, 1e5 runs)",
                format!("{:.4} ± {:.4}", stats.p_hat, stats.std_err),
                format!("0.5 ± {MC_BAND}"),
                failure,
            ));
        }
        Err(e) => rows.push(CheckRow::new("Monte Carlo detection (z-basis, 1e5 runs)", "error", "0.5", Some(e.to_string()))),
    }
    match monte_carlo_detection(&RunConfig::control_only(), &no_attack(), BASELINE_TRIALS, options.seed) {
        Ok(stats) => {
            let failure = (stats.detections != 0).then(|| format!("seed={}: {} detections", options.seed, stats.detections));
            rows.push(CheckRow::new("Monte Carlo no-attack baseline (1e4 runs)", stats.detections, 0, failure));
        }
        Err(e) => rows.push(CheckRow::new("Monte Carlo no-attack baseline (1e4 runs)", "error", "0", Some(e.to_string()))),
    }
    rows
}

fn cumulative() -> Vec<CheckRow> {
    let rows = match claim_comparison(10) {
        Ok(rows) => rows,
        Err(e) => return vec![CheckRow::new("cumulative table", "error", "rows", Some(e.to_string()))],
    };
    let first = rows[0];
    let last = rows[9];
    let n1_fail = (first.p_correct != 0.5 || first.p_claimed != CLAIMED_PER_RUN)
        .then(|| format!("n=1: {} vs {}", first.p_correct, first.p_claimed));
    let claimed_10 = cumulative_detection(CLAIMED_PER_RUN, 10);
    let n10_fail = (last.p_correct != 1.0 - 2f64.powi(-10) || (last.p_claimed - claimed_10).abs() > EXACT_TOL)
        .then(|| format!("n=10: {} vs {}", last.p_correct, last.p_claimed));
    vec![
        CheckRow::new(
            "cumulative n=1 (corrected vs claimed)",
            format!("{} vs {}", fmt_p(first.p_correct), fmt_p(first.p_claimed)),
            "0.5 vs 0.75",
            n1_fail,
        ),
        CheckRow::new(
            "cumulative n=10 (corrected vs claimed)",
            format!("{} vs {}", fmt_p(last.p_correct), fmt_p(last.p_claimed)),
            format!("0.9990234375 vs {}", fmt_p(claimed_10)),
            n10_fail,
        ),
    ]
}

pub fn run_checks(options: &VerifyOptions) -> Vec<CheckRow> {
    let mut rows = vec![
        uniform_sweep("per-run detection (z-basis)", &z_basis_disturbance(Legs::BtoA), 0.5, options),
        uniform_sweep("per-run detection (z-basis, both legs)", &z_basis_disturbance(Legs::Both), 0.5, options),
        uniform_sweep("per-run detection (no attack)", &no_attack(), 0.0, options),
        parity_exclusion(options),
        table_vs_vectors(),
        group_laws(),
        dense_coding(),
    ];
    rows.extend(monte_carlo(options));
    rows.extend(cumulative());
    rows
}

pub fn render(rows: &[CheckRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let status = if r.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{:<width$}: {} expected {} {status}\n",
            r.name, r.observed, r.expected
        ));
        if let Some(d) = &r.detail {
            out.push_str(&format!("    first failure: {d}\n"));
        }
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        out.push_str(&format!("all {} checks passed\n", rows.len()));
    } else {
        out.push_str(&format!("{failed} of {} checks failed\n", rows.len()));
    }
    out
}
