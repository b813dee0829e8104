use serde_json::Value;

use quantum_dialogue_cli::run;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["qdialogue"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = invoke(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn verify_passes_and_shows_the_headline_rows() {
    let (code, out, _) = invoke(&["verify"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("per-run detection (z-basis)"));
    assert!(out.contains(": 0.5 expected 0.5 PASS"));
    assert!(out.contains("0.5 vs 0.75"));
}

#[test]
fn exact_worked_example() {
    let doc = json(&["exact", "--initial", "psi-minus", "--bob", "01", "--alice", "10", "--attack", "z-basis", "--legs", "b2a"]);
    let r = &doc["results"][0];
    assert_eq!(r["p_detect"], 0.5);
    assert_eq!(r["outcome_distribution"]["phi-plus"], 0.5);
    assert_eq!(r["outcome_distribution"]["phi-minus"], 0.5);
    assert_eq!(r["outcome_distribution"]["psi-plus"], 0.0);
}

#[test]
fn exact_sweeps() {
    let none = json(&["exact", "--sweep", "--attack", "none"]);
    let rows = none["results"].as_array().unwrap();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r["p_detect"] == 0.0));

    let both = json(&["exact", "--sweep", "--attack", "z-basis", "--legs", "both"]);
    let rows = both["results"].as_array().unwrap();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r["p_detect"] == 0.5));
}

#[test]
fn document_keys_are_in_documented_order() {
    let (_, out, _) = invoke(&["table", "--max-n", "2", "--format", "json"]);
    let pos: Vec<usize> = ["tool_version", "command", "parameters", "results", "provenance"]
        .iter()
        .map(|k| out.find(&format!("\"{k}\"")).unwrap())
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn basis_attack_is_flagged_as_extension() {
    let doc = json(&["exact", "--sweep", "--attack", "basis:theta=0.3,phi=1.1", "--legs", "both"]);
    let notes = doc["provenance"]["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("extension")));
    let z = json(&["exact", "--sweep"]);
    assert!(z["provenance"]["notes"].as_array().unwrap().is_empty());
}

#[test]
fn simulate_examples() {
    let doc = json(&["simulate", "--runs", "100000", "--cm-prob", "1.0", "--attack", "z-basis", "--seed", "42"]);
    let p = doc["results"]["p_hat"].as_f64().unwrap();
    assert!((0.494..=0.506).contains(&p), "{p}");

    let doc = json(&["simulate", "--runs", "1000", "--attack", "none", "--seed", "7"]);
    assert_eq!(doc["results"]["detections"], 0);
    assert_eq!(doc["parameters"]["seed"], 7);
}

#[test]
fn omitted_seed_is_echoed() {
    let doc = json(&["simulate", "--runs", "2000"]);
    let seed = doc["parameters"]["seed"].as_u64().unwrap();
    assert_eq!(doc["provenance"]["seed"], seed);
    let again = json(&["simulate", "--runs", "2000", "--seed", &seed.to_string()]);
    assert_eq!(doc["results"], again["results"]);

    let (code, out, _) = invoke(&["trace"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("seed "));
}

#[test]
fn trace_examples() {
    let doc = json(&["trace", "--initial", "psi-minus", "--bob", "01", "--alice", "00", "--attack", "none"]);
    let t = &doc["results"][0];
    assert_eq!(t["announced_outcome"], "psi-plus");
    assert_eq!(t["detected"], false);

    let doc = json(&["trace", "--initial", "psi-minus", "--bob", "01", "--alice", "10", "--attack", "z-basis", "--seed", "3"]);
    let t = &doc["results"][0];
    let steps = t["steps"].as_array().unwrap();
    let attacked = steps.iter().find(|s| s["step"] == "eve-b2a").unwrap();
    let nonzero = attacked["state"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c[0].as_f64().unwrap().abs() + c[1].as_f64().unwrap().abs() > 1e-12)
        .count();
    assert_eq!(nonzero, 1);
    let outcome = t["announced_outcome"].as_str().unwrap();
    assert!(outcome == "phi-plus" || outcome == "phi-minus");

    let doc = json(&["trace", "--attack", "none", "--seed", "1"]);
    let t = &doc["results"][0];
    assert!(t["mode"].is_string());
    assert!(t["alice_decoded_bits"].is_string());
    assert!(t["bob_decoded_bits"].is_string());
    assert_eq!(t["alice_decoded_bits"], t["bob_enc"]["bits"]);
}

#[test]
fn table_examples() {
    let doc = json(&["table", "--max-n", "1"]);
    assert_eq!(doc["results"][0]["n"], 1);
    assert_eq!(doc["results"][0]["p_correct"], 0.5);
    assert_eq!(doc["results"][0]["p_claimed"], 0.75);

    let doc = json(&["table", "--max-n", "2"]);
    assert_eq!(doc["results"][1]["p_correct"], 0.75);
    assert_eq!(doc["results"][1]["p_claimed"], 0.9375);

    let (code, out, _) = invoke(&["table", "--max-n", "10", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0], "n,p_correct,p_claimed");
    assert_eq!(lines[10], "10,0.9990234375,0.999999046326");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let (code, out, _) = invoke(&["table", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("n,p_correct,p_claimed\n"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["exact", "--initial", "psi-zero", "--bob", "01", "--alice", "10"][..],
        &["exact", "--initial", "psi-minus", "--bob", "2", "--alice", "10"],
        &["exact", "--sweep", "--attack", "sideways"],
        &["exact", "--sweep", "--legs", "up"],
        &["exact", "--sweep", "--attack", "basis:theta=3,phi=0"],
        &["exact", "--initial", "psi-minus"],
        &["simulate", "--cm-prob", "1.5"],
        &["simulate", "--runs", "0"],
        &["table", "--max-n", "0"],
        &["frobnicate"],
    ] {
        let (code, _, err) = invoke(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_is_available_everywhere() {
    for sub in ["verify", "exact", "simulate", "trace", "table"] {
        let (code, out, _) = invoke(&[sub, "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("Usage"), "{sub}");
    }
}

#[test]
fn simulate_without_control_runs_fails() {
    let (code, _, err) = invoke(&["simulate", "--runs", "10", "--cm-prob", "0", "--seed", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("error"));
}

#[test]
fn json_documents_round_trip() {
    use quantum_dialogue::analysis::{CumulativeRow, DetectionStats, ExactResult};
    use quantum_dialogue_cli::commands::TraceRecord;
    use quantum_dialogue_cli::document::OutputDocument;

    fn check<T: serde::Serialize + serde::de::DeserializeOwned>(args: &[&str]) {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let (_, out, _) = invoke(&full);
        let doc: OutputDocument<T> = serde_json::from_str(&out).unwrap();
        assert_eq!(doc.to_json(), out, "{args:?}");
    }
    check::<Vec<ExactResult>>(&["exact", "--sweep", "--attack", "basis:theta=0.3,phi=1.1", "--legs", "both"]);
    check::<DetectionStats>(&["simulate", "--runs", "5000", "--seed", "9"]);
    check::<Vec<TraceRecord>>(&["trace", "--seed", "4", "--legs", "both"]);
    check::<Vec<CumulativeRow>>(&["table"]);
}
