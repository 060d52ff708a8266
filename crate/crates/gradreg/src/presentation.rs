//! Graded quiver presentations `A = kQ/I` and their JSON form.
//!
//! Paths are written left to right in composition order: `[a, b]` is the
//! path that follows `a` and then `b`, so `target(a) = source(b)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{rational_string, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: BigRational,
    /// Arrow indices in composition order; never empty.
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    pub field: FieldSpec,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

impl Relation {
    /// `(source, target, degree, length of first term)`; valid after validation.
    pub fn shape(&self, arrows: &[Arrow]) -> (usize, usize, usize) {
        let p = &self.terms[0].path;
        let deg = p.iter().map(|&a| arrows[a].degree).sum();
        (arrows[p[0]].source, arrows[*p.last().unwrap()].target, deg)
    }

    /// Whether all terms have the same number of arrows.
    pub fn is_length_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].path.len() == w[1].path.len())
    }
}

impl QuiverPresentation {
    /// Builds and validates a presentation from already-resolved parts.
    pub fn new(field: FieldSpec, vertices: Vec<String>, arrows: Vec<Arrow>, relations: Vec<Relation>) -> Result<Self> {
        let p = QuiverPresentation { field: field.validate().map_err(|e| Error::Syntax(e.to_string()))?, vertices, arrows, relations };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::Syntax("at least one vertex is required".into()));
        }
        let mut seen = HashMap::new();
        for v in &self.vertices {
            if seen.insert(v.as_str(), ()).is_some() {
                return Err(Error::Syntax(format!("duplicate vertex name {v:?}")));
            }
        }
        let mut names = HashMap::new();
        for a in &self.arrows {
            if names.insert(a.name.as_str(), ()).is_some() {
                return Err(Error::Syntax(format!("duplicate arrow name {:?}", a.name)));
            }
            if a.source >= self.vertices.len() || a.target >= self.vertices.len() {
                return Err(Error::UnknownSymbol(format!("arrow {:?} uses an undeclared vertex", a.name)));
            }
        }
        for (ri, rel) in self.relations.iter().enumerate() {
            if rel.terms.is_empty() {
                return Err(Error::Syntax(format!("relation {ri} has no terms")));
            }
            for t in &rel.terms {
                if t.path.is_empty() {
                    return Err(Error::Syntax(format!("relation {ri} contains an empty path")));
                }
                if let Some(&bad) = t.path.iter().find(|&&a| a >= self.arrows.len()) {
                    return Err(Error::UnknownSymbol(format!("arrow index {bad} in relation {ri}")));
                }
                for w in t.path.windows(2) {
                    let (a, b) = (&self.arrows[w[0]], &self.arrows[w[1]]);
                    if a.target != b.source {
                        return Err(Error::NonComposablePath(format!(
                            "relation {ri}: target of {} is {} but source of {} is {}",
                            a.name, self.vertices[a.target], b.name, self.vertices[b.source]
                        )));
                    }
                }
            }
            let shape = |t: &Term| {
                let deg: usize = t.path.iter().map(|&a| self.arrows[a].degree).sum();
                (self.arrows[t.path[0]].source, self.arrows[*t.path.last().unwrap()].target, deg)
            };
            let first = shape(&rel.terms[0]);
            if let Some(t) = rel.terms.iter().find(|t| shape(t) != first) {
                let other = shape(t);
                return Err(Error::InhomogeneousRelation(format!(
                    "relation {ri}: term {} has (source, target, degree) = ({}, {}, {}), expected ({}, {}, {})",
                    self.path_name(&t.path),
                    self.vertices[other.0],
                    self.vertices[other.1],
                    other.2,
                    self.vertices[first.0],
                    self.vertices[first.1],
                    first.2
                )));
            }
        }
        Ok(())
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn path_name(&self, path: &[usize]) -> String {
        path.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }

    pub fn has_degree0_arrows(&self) -> bool {
        self.arrows.iter().any(|a| a.degree == 0)
    }

    /// Parses the JSON presentation document.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Syntax("top level must be an object".into()))?;
        let field = match obj.get("field") {
            None => FieldSpec::DEFAULT,
            Some(Value::String(s)) if s == "Q" => FieldSpec::Rationals,
            Some(Value::Object(o)) if o.len() == 1 && o.contains_key("Fp") => {
                let p = o["Fp"].as_u64().ok_or_else(|| Error::Syntax("\"Fp\" must be a positive integer".into()))?;
                let p = u32::try_from(p).map_err(|_| Error::Syntax(format!("modulus {p} too large")))?;
                FieldSpec::PrimeField(p)
            }
            Some(other) => return Err(Error::Syntax(format!("bad field {other}"))),
        };
        let vertices: Vec<String> = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Syntax("\"vertices\" must be an array".into()))?
            .iter()
            .map(|x| x.as_str().map(str::to_owned).ok_or_else(|| Error::Syntax("vertex names must be strings".into())))
            .collect::<Result<_>>()?;
        let vindex = |name: &str| {
            vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownSymbol(format!("vertex {name:?}")))
        };
        let empty = Vec::new();
        let raw_arrows = match obj.get("arrows") {
            None => &empty,
            Some(a) => a.as_array().ok_or_else(|| Error::Syntax("\"arrows\" must be an array".into()))?,
        };
        let mut arrows = Vec::new();
        for a in raw_arrows {
            let field_str = |k: &str| {
                a.get(k).and_then(Value::as_str).ok_or_else(|| Error::Syntax(format!("arrow field {k:?} must be a string")))
            };
            let degree = a
                .get("deg")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Syntax("arrow field \"deg\" must be a nonnegative integer".into()))?;
            arrows.push(Arrow {
                name: field_str("name")?.to_owned(),
                source: vindex(field_str("from")?)?,
                target: vindex(field_str("to")?)?,
                degree: degree as usize,
            });
        }
        let raw_rels = match obj.get("relations") {
            None => &empty,
            Some(r) => r.as_array().ok_or_else(|| Error::Syntax("\"relations\" must be an array".into()))?,
        };
        let mut relations = Vec::new();
        for r in raw_rels {
            let terms_raw = r.as_array().ok_or_else(|| Error::Syntax("each relation must be an array of terms".into()))?;
            let mut terms = Vec::new();
            for t in terms_raw {
                let coef = match t.get("coef") {
                    Some(Value::String(s)) => parse_rational(s)?,
                    Some(Value::Number(n)) if n.is_i64() => BigRational::from_integer(BigInt::from(n.as_i64().unwrap())),
                    _ => return Err(Error::Syntax("term \"coef\" must be an integer or a rational string".into())),
                };
                let path = t
                    .get("path")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Syntax("term \"path\" must be an array".into()))?
                    .iter()
                    .map(|x| {
                        let name = x.as_str().ok_or_else(|| Error::Syntax("path entries must be arrow names".into()))?;
                        arrows
                            .iter()
                            .position(|a| a.name == name)
                            .ok_or_else(|| Error::UnknownSymbol(format!("arrow {name:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                terms.push(Term { coef, path });
            }
            relations.push(Relation { terms });
        }
        Self::new(field, vertices, arrows, relations)
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> Value {
        let field = match self.field {
            FieldSpec::Rationals => json!("Q"),
            FieldSpec::PrimeField(p) => json!({ "Fp": p }),
        };
        let arrows: Vec<Value> = self
            .arrows
            .iter()
            .map(|a| {
                json!({
                    "name": a.name,
                    "from": self.vertices[a.source],
                    "to": self.vertices[a.target],
                    "deg": a.degree,
                })
            })
            .collect();
        let relations: Vec<Value> = self
            .relations
            .iter()
            .map(|r| {
                Value::Array(
                    r.terms
                        .iter()
                        .map(|t| {
                            json!({
                                "coef": rational_string(&t.coef),
                                "path": t.path.iter().map(|&a| self.arrows[a].name.clone()).collect::<Vec<_>>(),
                            })
                        })
                        .collect(),
                )
            })
            .collect();
        json!({ "field": field, "vertices": self.vertices, "arrows": arrows, "relations": relations })
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("presentation serializes")
    }

    /// Same presentation over another base field.
    pub fn with_field(&self, field: FieldSpec) -> Result<Self> {
        let mut p = self.clone();
        p.field = field.validate()?;
        Ok(p)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Syntax(format!("bad coefficient {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?),
        None => (s.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}
