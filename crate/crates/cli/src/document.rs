//! The JSON result document shared by every subcommand.
//!
//! Top-level keys are emitted in the order `tool_version`, `command`,
//! `parameters`, `results`, `provenance`. Nested objects keep their
//! declaration (or insertion) order. Non-integer numbers are rounded to 12
//! significant digits, so a document re-serializes to the same bytes.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use quantum_dialogue::analysis::round_significant;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const FLOAT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument<T> {
    pub tool_version: String,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub results: T,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub attack: Option<String>,
    pub notes: Vec<String>,
}

impl<T: Serialize> OutputDocument<T> {
    pub fn new(command: &str, parameters: Map<String, Value>, results: T, provenance: Provenance) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            parameters,
            results,
            provenance,
        }
    }

    pub fn to_json(&self) -> String {
        to_stable_json(self)
    }

    /// The `results` payload alone, in the same stable encoding.
    pub fn results_json(&self) -> String {
        to_stable_json(&self.results)
    }
}

pub fn to_stable_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("result types serialize to JSON");
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            if let Some(r) = Number::from_f64(round_significant(x, FLOAT_DIGITS)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Builds an ordered parameter map from `(key, value)` pairs.
pub fn params<I, K, V>(pairs: I) -> Map<String, Value>
where
    I: IntoIterator<Item = (K, V)>,
    K: Into<String>,
    V: Into<Value>,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect()
}
