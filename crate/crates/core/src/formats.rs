//! JSON documents for algebras, polynomial maps and reports.
//!
//! Every coefficient is a string such as `"2/3"` or `"-5"`; JSON numbers
//! are refused for coefficients so no float can reach exact arithmetic.

use std::fmt;

use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{AlgebraError, MultilinearAlgebra, TensorEntry};
use crate::exactmath::{format_rational, indexed_vars, parse_rational, vars, MultiPoly, Rational};
use crate::polymap::{PolyMap, PolyMapError};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}, field `{field}`: {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Map(#[from] PolyMapError),
}

/// A rational carried as its canonical string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Text;
        impl Visitor<'_> for Text {
            type Value = RationalText;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string such as \"2/3\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<RationalText, E> {
                parse_rational(v).map(RationalText).map_err(E::custom)
            }
        }
        d.deserialize_str(Text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub inputs: Vec<usize>,
    pub output: usize,
    pub value: RationalText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub arity: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    pub entries: Vec<EntryDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exponents: Vec<u32>,
    pub coeff: RationalText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    /// Variable names; `X1…Xn` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub coordinates: Vec<Vec<TermDoc>>,
}

/// Deserializes any document, locating failures by line, column and field path.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        FormatError::Parse {
            line: inner.line(),
            column: inner.column(),
            field,
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|e| FormatError::Parse {
        line: e.line(),
        column: e.column(),
        field: ".".into(),
        message: strip_position(&e.to_string()),
    })?;
    Ok(value)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn emit_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

impl AlgebraDoc {
    pub fn from_algebra(alg: &MultilinearAlgebra) -> Self {
        AlgebraDoc {
            arity: alg.arity(),
            dim: alg.dim(),
            basis: alg.basis_names().map(<[String]>::to_vec),
            entries: alg
                .entries()
                .into_iter()
                .map(|e| EntryDoc {
                    inputs: e.inputs,
                    output: e.output,
                    value: RationalText(e.value),
                })
                .collect(),
        }
    }

    /// Validates and normalizes; permuted duplicates must agree.
    pub fn to_algebra(&self) -> Result<MultilinearAlgebra, AlgebraError> {
        let entries: Vec<TensorEntry> = self
            .entries
            .iter()
            .map(|e| TensorEntry {
                inputs: e.inputs.clone(),
                output: e.output,
                value: e.value.0.clone(),
            })
            .collect();
        let alg = MultilinearAlgebra::new(self.arity, self.dim, &entries)?;
        match &self.basis {
            Some(names) => alg.with_basis_names(names.clone()),
            None => Ok(alg),
        }
    }
}

impl MapDoc {
    pub fn from_map(map: &PolyMap) -> Self {
        let names: Vec<String> = map.vars().iter().map(|v| v.to_string()).collect();
        MapDoc {
            vars: Some(names),
            coordinates: map
                .coords()
                .iter()
                .map(|c| {
                    c.terms()
                        .map(|(m, k)| TermDoc {
                            exponents: m.exponents().to_vec(),
                            coeff: RationalText(k.clone()),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_map(&self) -> Result<PolyMap, PolyMapError> {
        let n = self.coordinates.len();
        let ring = match &self.vars {
            Some(names) => vars(names),
            None => indexed_vars("X", n),
        };
        let coords = self
            .coordinates
            .iter()
            .enumerate()
            .map(|(i, terms)| {
                MultiPoly::from_terms(&ring, terms.iter().map(|t| (t.exponents.clone(), t.coeff.0.clone())))
                    .map_err(|e| PolyMapError::Input(format!("coordinate {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(&ring, coords)
    }
}

pub fn parse_algebra(text: &str) -> Result<MultilinearAlgebra, FormatError> {
    Ok(parse_json::<AlgebraDoc>(text)?.to_algebra()?)
}

pub fn emit_algebra(alg: &MultilinearAlgebra) -> String {
    emit_json(&AlgebraDoc::from_algebra(alg))
}

pub fn parse_map(text: &str) -> Result<PolyMap, FormatError> {
    Ok(parse_json::<MapDoc>(text)?.to_map()?)
}

pub fn emit_map(map: &PolyMap) -> String {
    emit_json(&MapDoc::from_map(map))
}
