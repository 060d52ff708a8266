//! Built-in algebras with their asserted properties.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::presentation::QuiverPresentation;
use crate::scalar::FieldSpec;

/// Names accepted by [`entry`]; `qplane` also accepts `qplane(q)`.
pub const NAMES: [&str; 10] = ["poly1", "poly2", "poly3", "qplane", "jordan", "ext2", "dualnum", "kron2", "tri2", "a0loop"];

/// Default parameter of the quantum plane.
pub const DEFAULT_Q: i64 = 2;

/// AS-Gorenstein data `(d, ℓ_i, σ)` shipped with a catalog entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinAssertion {
    pub dim: i64,
    pub ell: Vec<i64>,
    /// `sigma[i]` is the vertex index `σ(i)`.
    pub sigma: Vec<usize>,
}

/// Hypotheses asserted for a catalog algebra; `None` means unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub noetherian: Option<bool>,
    pub bdc: Option<bool>,
    pub a0_semisimple: Option<bool>,
    pub finite_dimensional: Option<bool>,
    pub connected: bool,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub presentation: QuiverPresentation,
    pub flags: Flags,
    pub gorenstein: Option<GorensteinAssertion>,
}

fn loop_arrows(names: &[&str]) -> Value {
    Value::Array(names.iter().map(|n| json!({"name": n, "from": "1", "to": "1", "deg": 1})).collect())
}

fn term(coef: &str, path: &[&str]) -> Value {
    json!({"coef": coef, "path": path})
}

fn field_json(field: FieldSpec) -> Value {
    match field {
        FieldSpec::Rationals => json!("Q"),
        FieldSpec::PrimeField(p) => json!({ "Fp": p }),
    }
}

fn commutator(a: &str, b: &str) -> Value {
    json!([term("1", &[a, b]), term("-1", &[b, a])])
}

/// Splits `qplane(3)` into `("qplane", Some(3))`.
fn parse_name(name: &str) -> Result<(&str, Option<i64>)> {
    match name.split_once('(') {
        None => Ok((name, None)),
        Some((base, rest)) => {
            let arg = rest.strip_suffix(')').ok_or_else(|| Error::BadInput(format!("bad catalog name {name:?}")))?;
            let q = arg.trim().parse::<i64>().map_err(|_| Error::BadInput(format!("bad parameter in {name:?}")))?;
            Ok((base, Some(q)))
        }
    }
}

/// Looks up a catalog entry over the given field.
pub fn entry(name: &str, field: FieldSpec) -> Result<CatalogEntry> {
    let (base, param) = parse_name(name)?;
    if param.is_some() && base != "qplane" {
        return Err(Error::BadInput(format!("catalog entry {base:?} takes no parameter")));
    }
    let f = field_json(field);
    let infinite = Flags {
        noetherian: Some(true),
        bdc: Some(true),
        a0_semisimple: Some(true),
        finite_dimensional: Some(false),
        connected: true,
    };
    let finite = Flags { finite_dimensional: Some(true), ..infinite.clone() };
    let gor = |dim: i64, ell: i64| Some(GorensteinAssertion { dim, ell: vec![ell], sigma: vec![0] });
    let (doc, flags, gorenstein) = match base {
        "poly1" => (json!({"field": f, "vertices": ["1"], "arrows": loop_arrows(&["x"]), "relations": []}), infinite, gor(1, 1)),
        "poly2" => (
            json!({"field": f, "vertices": ["1"], "arrows": loop_arrows(&["x", "y"]), "relations": [commutator("x", "y")]}),
            infinite,
            gor(2, 2),
        ),
        "poly3" => (
            json!({"field": f, "vertices": ["1"], "arrows": loop_arrows(&["x", "y", "z"]),
                "relations": [commutator("x", "y"), commutator("x", "z"), commutator("y", "z")]}),
            infinite,
            gor(3, 3),
        ),
        "qplane" => {
            let q = param.unwrap_or(DEFAULT_Q);
            (
                json!({"field": f, "vertices": ["1"], "arrows": loop_arrows(&["x", "y"]),
                    "relations": [[term("1", &["y", "x"]), term(&(-q).to_string(), &["x", "y"])]]}),
                infinite,
                gor(2, 2),
            )
        }
        "jordan" => (
            json!({"field": f, "vertices": ["1"], "arrows": loop_arrows(&["x", "y"]),
                "relations": [[term("1", &["y", "x"]), term("-1", &["x", "y"]), term("-1", &["x", "x"])]]}),
            infinite,
            gor(2, 2),
        ),
        "ext2" => (
            json!({"field": f, "vertices": ["1"], "arrows": loop_arrows(&["x", "y"]),
                "relations": [[term("1", &["x", "x"])], [term("1", &["y", "y"])], [term("1", &["x", "y"]), term("1", &["y", "x"])]]}),
            finite,
            gor(0, -2),
        ),
        "dualnum" => (
            json!({"field": f, "vertices": ["1"], "arrows": loop_arrows(&["x"]), "relations": [[term("1", &["x", "x"])]]}),
            finite,
            gor(0, -1),
        ),
        "kron2" => (
            json!({"field": f, "vertices": ["1", "2"],
                "arrows": [{"name": "a", "from": "1", "to": "2", "deg": 1}, {"name": "b", "from": "1", "to": "2", "deg": 1}],
                "relations": []}),
            Flags { connected: false, ..finite },
            None,
        ),
        "tri2" => (
            json!({"field": f, "vertices": ["1", "2"],
                "arrows": [{"name": "x", "from": "1", "to": "1", "deg": 1}, {"name": "y", "from": "2", "to": "2", "deg": 1},
                           {"name": "a", "from": "1", "to": "2", "deg": 1}],
                "relations": [[term("1", &["x", "a"]), term("-1", &["a", "y"])]]}),
            Flags { noetherian: None, bdc: None, a0_semisimple: Some(true), finite_dimensional: Some(false), connected: false },
            None,
        ),
        "a0loop" => (
            json!({"field": f, "vertices": ["1"], "arrows": [{"name": "e", "from": "1", "to": "1", "deg": 0}],
                "relations": [[term("1", &["e", "e"])]]}),
            Flags { a0_semisimple: Some(false), connected: false, ..finite },
            None,
        ),
        other => return Err(Error::BadInput(format!("unknown catalog entry {other:?}"))),
    };
    let presentation = QuiverPresentation::from_json(&doc)?;
    let name = match (base, param) {
        ("qplane", Some(q)) => format!("qplane({q})"),
        _ => base.to_owned(),
    };
    Ok(CatalogEntry { name, presentation, flags, gorenstein })
}

/// Presentation of a catalog entry.
pub fn presentation(name: &str, field: FieldSpec) -> Result<QuiverPresentation> {
    Ok(entry(name, field)?.presentation)
}

impl Flags {
    /// No assertions; only connectedness, which is read off the quiver.
    pub fn unasserted(p: &QuiverPresentation) -> Self {
        Flags {
            noetherian: None,
            bdc: None,
            a0_semisimple: None,
            finite_dimensional: None,
            connected: p.vertices.len() == 1 && !p.has_degree0_arrows(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "noetherian": self.noetherian,
            "bdc": self.bdc,
            "a0Semisimple": self.a0_semisimple,
            "finiteDimensional": self.finite_dimensional,
            "connected": self.connected,
        })
    }
}

impl CatalogEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "presentation": self.presentation.to_json(),
            "flags": self.flags.to_json(),
            "gorenstein": self.gorenstein.as_ref().map(|g| json!({"d": g.dim, "ell": g.ell, "sigma": g.sigma})),
        })
    }
}
