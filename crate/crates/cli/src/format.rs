//! JSON documents for polytopes and piecewise-affine functions.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use toric_k::rational::parse_rational;
use toric_k::{AffineFn, PlConvexFn, Polytope, Rational};

use crate::error::CliError;

/// A rational written as `"p/q"`, `"p"` or a JSON integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalText;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<RationalText, E> {
                parse_rational(v).map(RationalText).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RationalText, E> {
                Ok(RationalText(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RationalText, E> {
                Ok(RationalText(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetDocument {
    pub normal: Vec<i64>,
    pub offset: RationalText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDocument {
    pub name: String,
    pub dim: usize,
    pub facets: Vec<FacetDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl PolytopeDocument {
    pub fn from_polytope(p: &Polytope, name: &str) -> PolytopeDocument {
        PolytopeDocument {
            name: name.to_string(),
            dim: p.dim(),
            facets: p
                .facets()
                .iter()
                .map(|h| FacetDocument {
                    normal: h.normal.iter().map(|x| i64::try_from(x).expect("normal fits in i64")).collect(),
                    offset: RationalText(h.offset.clone()),
                })
                .collect(),
            metadata: None,
        }
    }

    pub fn to_polytope(&self) -> Result<Polytope, CliError> {
        let facets = self
            .facets
            .iter()
            .map(|f| (f.normal.iter().map(|&x| BigInt::from(x)).collect(), f.offset.0.clone()))
            .collect();
        Polytope::new(self.dim, facets, Some(self.name.clone())).map_err(CliError::Invalid)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDocument {
    pub a: Vec<RationalText>,
    pub c: RationalText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlFunctionDocument {
    pub pieces: Vec<PieceDocument>,
}

impl PlFunctionDocument {
    pub fn to_function(&self) -> Result<PlConvexFn, CliError> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| AffineFn::new(p.a.iter().map(|x| x.0.clone()).collect(), p.c.0.clone()))
            .collect();
        PlConvexFn::new(pieces).map_err(CliError::Invalid)
    }

    pub fn from_function(f: &PlConvexFn) -> PlFunctionDocument {
        PlFunctionDocument {
            pieces: f
                .pieces()
                .iter()
                .map(|p| PieceDocument {
                    a: p.linear.iter().cloned().map(RationalText).collect(),
                    c: RationalText(p.constant.clone()),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, source: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        file: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn parse_polytope_document(text: &str, source: &str) -> Result<PolytopeDocument, CliError> {
    parse_json(text, source)
}

pub fn parse_function_document(text: &str, source: &str) -> Result<PlFunctionDocument, CliError> {
    parse_json(text, source)
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Loads `catalog:NAME` from the built-in catalog, anything else from disk.
pub fn load_polytope(input: &str) -> Result<(PolytopeDocument, Polytope), CliError> {
    let doc = match input.strip_prefix("catalog:") {
        Some(name) => crate::catalog::lookup(name)
            .ok_or_else(|| CliError::UnknownCatalogEntry(name.to_string()))?
            .document(),
        None => parse_polytope_document(&read_file(Path::new(input))?, input)?,
    };
    let p = doc.to_polytope()?;
    Ok((doc, p))
}

pub fn load_function(path: &str, dim: usize) -> Result<PlConvexFn, CliError> {
    let doc = parse_function_document(&read_file(Path::new(path))?, path)?;
    let f = doc.to_function()?;
    if f.dim() != dim {
        return Err(CliError::Invalid(toric_k::Error::DimensionMismatch {
            expected: dim,
            found: f.dim(),
        }));
    }
    Ok(f)
}

/// Comma-separated rationals, as in `--x0 1/2,1/2`.
pub fn parse_point(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|s| parse_rational(s).map_err(|e| CliError::Usage(format!("bad coordinate in {text:?}: {e}"))))
        .collect()
}
