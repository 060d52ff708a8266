//! The JSON report envelope shared by every subcommand.

use serde_json::{json, Value};

use crate::algebra::TruncatedAlgebra;
use crate::error::{Error, Result};
use crate::gmod::ExtendedDegree;
use crate::scalar::{Field, FieldSpec};

pub const TOOL: &str = "gradreg";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `{"tool","version","algebra","bounds","results","checks"}`.
pub fn envelope(algebra: Value, bounds: Value, results: Value, checks: Vec<Value>) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "algebra": algebra,
        "bounds": bounds,
        "results": results,
        "checks": checks,
    })
}

pub fn field_json(f: FieldSpec) -> Value {
    match f {
        FieldSpec::Rationals => json!("Q"),
        FieldSpec::PrimeField(p) => json!({ "Fp": p }),
    }
}

/// Name, field, vertices, truncation degree and Hilbert data of an algebra.
pub fn algebra_json<F: Field>(name: &str, alg: &TruncatedAlgebra<F>) -> Value {
    json!({
        "name": name,
        "field": field_json(alg.field_spec()),
        "vertices": alg.vertex_names(),
        "top": alg.top(),
        "hilbert": alg.hilbert().total,
    })
}

/// Serialization used for every output: pretty, keys sorted, trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Structural check of a report against the envelope schema.
pub fn validate(v: &Value) -> Result<()> {
    let bad = |m: &str| Err(Error::BadInput(format!("report: {m}")));
    let Some(o) = v.as_object() else { return bad("not an object") };
    for k in ["tool", "version", "algebra", "bounds", "results", "checks"] {
        if !o.contains_key(k) {
            return bad(&format!("missing key {k:?}"));
        }
    }
    if o.len() != 6 {
        return bad("unexpected top-level keys");
    }
    if o["tool"] != TOOL || !o["version"].is_string() {
        return bad("bad tool or version");
    }
    if !o["results"].is_object() || !o["checks"].is_array() {
        return bad("results must be an object and checks an array");
    }
    validate_degrees(&o["results"])?;
    validate_degrees(&o["checks"])
}

/// Every object with a `"kind"` key of a degree must deserialize as an [`ExtendedDegree`].
fn validate_degrees(v: &Value) -> Result<()> {
    match v {
        Value::Object(o) => {
            if let Some(Value::String(k)) = o.get("kind") {
                if ["int", "+inf", "-inf", "atLeast", "atMost"].contains(&k.as_str()) {
                    ExtendedDegree::from_json(v)?;
                    return Ok(());
                }
            }
            o.values().try_for_each(validate_degrees)
        }
        Value::Array(a) => a.iter().try_for_each(validate_degrees),
        _ => Ok(()),
    }
}

/// JSON for a failed run.
pub fn error_json(e: &Error) -> Value {
    json!({"tool": TOOL, "version": VERSION, "error": {"kind": e.kind(), "message": e.to_string(), "exitCode": e.exit_code()}})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::{Ext, Interval};

    #[test]
    fn envelope_validates_and_rejects_malformed_degrees() {
        let d = ExtendedDegree::from_interval(Interval::at_least(Ext::Fin(3))).to_json();
        let ok = envelope(json!({}), json!({}), json!({"x": d}), vec![]);
        validate(&ok).unwrap();
        let bad = envelope(json!({}), json!({}), json!({"x": {"kind": "int"}}), vec![]);
        assert!(validate(&bad).is_err());
        assert!(validate(&json!({"tool": "gradreg"})).is_err());
    }

    #[test]
    fn render_is_stable() {
        let v = json!({"b": 1, "a": [1, 2]});
        assert_eq!(render(&v), render(&serde_json::from_str(&render(&v)).unwrap()));
        assert!(render(&v).find("\"a\"") < render(&v).find("\"b\""));
    }
}
