//! JSON interchange format.
//!
//! ```json
//! {
//!   "alphabet": ["a"],
//!   "states": ["q0", "q1"],
//!   "start": ["q0"],
//!   "transitions": [
//!     {"from": "q0", "label": "a", "prob": "1", "to": "q1"},
//!     {"from": "q1", "label": null, "prob": "3/4", "to": null}
//!   ]
//! }
//! ```
//!
//! A `null` label together with a `null` target encodes termination.
//! Probabilities are rational strings. `start` is optional on input.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::GptsError;
use crate::expr::{Alphabet, Letter};
use crate::prob::{is_probability, parse_rational};

use super::{Gpts, Output};

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> GptsError {
    GptsError::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Gpts, GptsError> {
    from_json_str(&fs::read_to_string(path)?)
}

/// Writes the canonical form of `g`. Fails if `g` does not validate.
pub fn save(g: &Gpts, path: impl AsRef<Path>) -> Result<(), GptsError> {
    fs::write(path, to_json_string(g)?)?;
    Ok(())
}

pub fn from_json_str(text: &str) -> Result<Gpts, GptsError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root.as_object().ok_or_else(|| schema("", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "alphabet" | "states" | "start" | "transitions") {
            return Err(schema(format!("/{key}"), "unknown field"));
        }
    }

    let alphabet_json = array_field(obj, "alphabet")?;
    let mut alphabet = Alphabet::new();
    for (i, v) in alphabet_json.iter().enumerate() {
        alphabet.insert(letter_at(v, &format!("/alphabet/{i}"))?);
    }

    let mut g = Gpts::new(alphabet);
    for (i, v) in array_field(obj, "states")?.iter().enumerate() {
        let name = v
            .as_str()
            .ok_or_else(|| schema(format!("/states/{i}"), "expected a string"))?;
        g.add_state(name)
            .map_err(|_| schema(format!("/states/{i}"), format!("duplicate state `{name}`")))?;
    }

    if let Some(start) = obj.get("start") {
        let start = start.as_array().ok_or_else(|| schema("/start", "expected an array"))?;
        for (i, v) in start.iter().enumerate() {
            let ptr = format!("/start/{i}");
            let name = v.as_str().ok_or_else(|| schema(&ptr, "expected a string"))?;
            let id = g
                .state_id(name)
                .map_err(|_| schema(&ptr, format!("undeclared state `{name}`")))?;
            g.mark_start(id);
        }
    }

    for (i, t) in array_field(obj, "transitions")?.iter().enumerate() {
        let base = format!("/transitions/{i}");
        let t = t.as_object().ok_or_else(|| schema(&base, "expected an object"))?;
        for key in t.keys() {
            if !matches!(key.as_str(), "from" | "label" | "prob" | "to") {
                return Err(schema(format!("{base}/{key}"), "unknown field"));
            }
        }
        let field = |k: &str| t.get(k).ok_or_else(|| schema(format!("{base}/{k}"), "missing field"));
        let from_name = field("from")?
            .as_str()
            .ok_or_else(|| schema(format!("{base}/from"), "expected a string"))?;
        let from = g
            .state_id(from_name)
            .map_err(|_| schema(format!("{base}/from"), format!("undeclared state `{from_name}`")))?;

        let prob_ptr = format!("{base}/prob");
        let prob_text = field("prob")?
            .as_str()
            .ok_or_else(|| schema(&prob_ptr, "expected a rational string such as \"1/4\""))?;
        let prob = parse_rational(prob_text).map_err(|e| schema(&prob_ptr, e.to_string()))?;
        if !is_probability(&prob) {
            return Err(schema(&prob_ptr, format!("probability {prob} is outside [0, 1]")));
        }

        let out = match (field("label")?, field("to")?) {
            (Value::Null, Value::Null) => Output::Term,
            (Value::Null, _) => return Err(schema(format!("{base}/to"), "termination must have a null target")),
            (label, to) => {
                let a = letter_at(label, &format!("{base}/label"))?;
                if !g.alphabet().contains(&a) {
                    return Err(schema(
                        format!("{base}/label"),
                        format!("letter `{a}` is not in the alphabet"),
                    ));
                }
                let to_name = to
                    .as_str()
                    .ok_or_else(|| schema(format!("{base}/to"), "expected a string"))?;
                let to = g
                    .state_id(to_name)
                    .map_err(|_| schema(format!("{base}/to"), format!("undeclared state `{to_name}`")))?;
                Output::Step(a, to)
            }
        };
        g.add_transition(from, out, prob);
    }

    g.validate().map_err(GptsError::Invalid)?;
    Ok(g)
}

fn array_field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a Vec<Value>, GptsError> {
    obj.get(key)
        .ok_or_else(|| schema(format!("/{key}"), "missing field"))?
        .as_array()
        .ok_or_else(|| schema(format!("/{key}"), "expected an array"))
}

fn letter_at(v: &Value, ptr: &str) -> Result<Letter, GptsError> {
    let s = v.as_str().ok_or_else(|| schema(ptr, "expected a one-letter string"))?;
    let mut chars = s.chars();
    match (chars.next().and_then(Letter::new), chars.next()) {
        (Some(a), None) => Ok(a),
        _ => Err(schema(ptr, format!("`{s}` is not a lowercase letter"))),
    }
}

#[derive(Serialize)]
struct FileRepr<'a> {
    alphabet: Vec<String>,
    states: &'a [String],
    start: Vec<&'a str>,
    transitions: Vec<TransitionRepr<'a>>,
}

#[derive(Serialize)]
struct TransitionRepr<'a> {
    from: &'a str,
    label: Option<String>,
    prob: String,
    to: Option<&'a str>,
}

/// Canonical JSON: transitions grouped by source state in declaration
/// order, termination first, then steps by letter and target index.
pub fn to_json_string(g: &Gpts) -> Result<String, GptsError> {
    g.validate().map_err(GptsError::Invalid)?;
    let mut transitions = Vec::new();
    for x in 0..g.num_states() {
        let from = g.state_name(x);
        for (out, w) in g.transitions(x).sorted_by_key(|o| o.clone()) {
            transitions.push(TransitionRepr {
                from,
                label: match out {
                    Output::Term => None,
                    Output::Step(a, _) => Some(a.to_string()),
                },
                prob: w.to_string(),
                to: out.target().map(|&y| g.state_name(y)),
            });
        }
    }
    let repr = FileRepr {
        alphabet: g.alphabet().iter().map(|a| a.to_string()).collect(),
        states: g.state_names(),
        start: g.start().iter().map(|&s| g.state_name(s)).collect(),
        transitions,
    };
    let mut text = serde_json::to_string_pretty(&repr)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::prob::ratio;

    #[test]
    fn round_trips_canonical_text() {
        let g = systems_example();
        let text = to_json_string(&g).unwrap();
        let back = from_json_str(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(to_json_string(&back).unwrap(), text);
    }

    #[test]
    fn reads_terminations_and_start() {
        let g = from_json_str(
            r#"{"alphabet":["a"],"states":["s","t"],"start":["t"],
                "transitions":[{"from":"s","label":"a","prob":"0.5","to":"t"},
                               {"from":"t","label":null,"prob":"1","to":null}]}"#,
        )
        .unwrap();
        assert_eq!(g.start(), &[1]);
        assert_eq!(g.accept(1), ratio(1, 1));
        assert_eq!(g.transitions(0).get(&Output::Step(letter('a'), 1)), ratio(1, 2));
    }

    fn pointer_of(text: &str) -> String {
        match from_json_str(text) {
            Err(GptsError::Schema { pointer, .. }) => pointer,
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let base = |t: &str| format!(r#"{{"alphabet":["a"],"states":["s"],"transitions":[{t}]}}"#);
        assert_eq!(
            pointer_of(&base(r#"{"from":"s","label":"a","prob":"7/4","to":"s"}"#)),
            "/transitions/0/prob"
        );
        assert_eq!(
            pointer_of(&base(r#"{"from":"s","label":"a","prob":0.5,"to":"s"}"#)),
            "/transitions/0/prob"
        );
        assert_eq!(
            pointer_of(&base(r#"{"from":"s","label":"b","prob":"1/2","to":"s"}"#)),
            "/transitions/0/label"
        );
        assert_eq!(
            pointer_of(&base(r#"{"from":"s","label":"a","prob":"1/2","to":"x"}"#)),
            "/transitions/0/to"
        );
        assert_eq!(
            pointer_of(&base(r#"{"from":"s","label":null,"prob":"1/2","to":"s"}"#)),
            "/transitions/0/to"
        );
        assert_eq!(pointer_of(r#"{"alphabet":["a"],"transitions":[]}"#), "/states");
        assert_eq!(
            pointer_of(r#"{"alphabet":["ab"],"states":[],"transitions":[]}"#),
            "/alphabet/0"
        );
    }

    #[test]
    fn excess_mass_fails_validation() {
        let text = r#"{"alphabet":["a"],"states":["s"],"transitions":[
            {"from":"s","label":null,"prob":"3/4","to":null},
            {"from":"s","label":"a","prob":"1/2","to":"s"}]}"#;
        assert!(matches!(from_json_str(text), Err(GptsError::Invalid(_))));
    }
}
