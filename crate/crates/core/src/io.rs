//! JSON documents for fans and matroids.
//!
//! Serialization is canonical: keys sorted, two-space indentation, a trailing
//! newline, and no floating point numbers. Weights are integers or `"a/b"`
//! strings.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::fan::{build_fan, ExplicitFaces, WeightedFan};
use crate::linalg::RingTag;
use crate::matroid::Matroid;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightValue {
    Int(i64),
    Text(String),
}

impl WeightValue {
    fn to_rational(&self, context: &str) -> Result<BigRational> {
        match self {
            WeightValue::Int(x) => Ok(BigRational::from_integer((*x).into())),
            WeightValue::Text(s) => {
                let parse = |t: &str| {
                    t.trim()
                        .parse::<BigInt>()
                        .map_err(|_| parse_error(context, format!("cannot read {s:?} as a rational")))
                };
                match s.split_once('/') {
                    None => Ok(BigRational::from_integer(parse(s)?)),
                    Some((a, b)) => {
                        let den = parse(b)?;
                        if den == BigInt::from(0) {
                            return Err(parse_error(context, "zero denominator".into()));
                        }
                        Ok(BigRational::new(parse(a)?, den))
                    }
                }
            }
        }
    }

    fn from_rational(w: &BigRational) -> WeightValue {
        match (w.denom().is_one(), w.numer().to_i64()) {
            (true, Some(x)) => WeightValue::Int(x),
            (true, None) => WeightValue::Text(w.numer().to_string()),
            _ => WeightValue::Text(format!("{}/{}", w.numer(), w.denom())),
        }
    }
}

/// Explicit face list for non-simplicial fans. `covers` holds index pairs
/// `[lower, upper]` into `cones`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacesDocument {
    pub cones: Vec<Vec<usize>>,
    pub covers: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub ambient_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<FacesDocument>,
    pub maximal_cones: Vec<Vec<usize>>,
    pub rays: Vec<Vec<i64>>,
    /// Defaults to `"Z"`.
    #[serde(default)]
    pub ring: Option<String>,
    /// Aligned with `maximal_cones`; defaults to weight 1 everywhere.
    #[serde(default)]
    pub weights: Option<Vec<WeightValue>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatroidDocument {
    pub bases: Vec<Vec<usize>>,
    pub ground_size: usize,
}

fn parse_error(context: &str, message: String) -> Error {
    Error::Parse { context: context.to_string(), message }
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    parse_error(&format!("{what} (line {}, column {})", e.line(), e.column()), e.to_string())
}

/// Sorted keys through `serde_json::Value`, newline terminated. Arrays of
/// scalars stay on one line so that rays and cones read as rows.
fn canonical<T: Serialize>(doc: &T) -> Result<String> {
    let value = serde_json::to_value(doc).map_err(|e| Error::Internal(e.to_string()))?;
    let mut s = String::new();
    write_value(&value, 0, &mut s);
    s.push('\n');
    Ok(s)
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&format!("{}{}: ", pad(indent + 1), Value::String(k.clone())));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push_str(&format!("[{}]", parts.join(", ")));
        }
        other => out.push_str(&other.to_string()),
    }
}

pub fn fan_document_from_str(text: &str) -> Result<FanDocument> {
    serde_json::from_str(text).map_err(|e| json_error("fan document", e))
}

/// Validates a document and builds the weighted fan it describes.
pub fn weighted_fan_from_document(doc: &FanDocument) -> Result<WeightedFan> {
    let ring: RingTag = match &doc.ring {
        None => RingTag::Z,
        Some(r) => r.parse()?,
    };
    let rays = doc.rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let explicit = doc
        .faces
        .as_ref()
        .map(|f| ExplicitFaces { cones: f.cones.clone(), covers: f.covers.iter().map(|&[a, b]| (a, b)).collect() });
    let fan = build_fan(doc.ambient_rank, rays, doc.maximal_cones.clone(), explicit)?;
    let weights = match &doc.weights {
        None => vec![BigRational::one(); doc.maximal_cones.len()],
        Some(ws) => {
            let mut out = Vec::with_capacity(ws.len());
            for (i, w) in ws.iter().enumerate() {
                let context = format!("weights[{i}]");
                let q = w.to_rational(&context)?;
                if ring != RingTag::Q && !q.is_integer() {
                    return Err(parse_error(&context, format!("rational weight {q} requires ring Q")));
                }
                out.push(q);
            }
            out
        }
    };
    WeightedFan::new(fan, ring, weights)
}

pub fn parse_fan(text: &str) -> Result<WeightedFan> {
    weighted_fan_from_document(&fan_document_from_str(text)?)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| parse_error(&path.display().to_string(), e.to_string()))
}

pub fn read_fan(path: &Path) -> Result<WeightedFan> {
    let text = read_text(path)?;
    parse_fan(&text).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { context, message } => {
            Error::Parse { context: format!("{}: {context}", path.display()), message }
        }
        other => other,
    }
}

pub fn fan_document(wf: &WeightedFan) -> Result<FanDocument> {
    let fan = &wf.fan;
    let rays = fan
        .rays()
        .iter()
        .map(|r| {
            r.iter().map(|x| x.to_i64().ok_or_else(|| Error::Internal(format!("ray entry {x} exceeds i64")))).collect()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let maximal_cones = fan.input_maximal_order().iter().map(|&a| fan.face(a).rays.clone()).collect();
    let faces = (!fan.is_simplicial()).then(|| FacesDocument {
        cones: fan.faces().iter().map(|f| f.rays.clone()).collect(),
        covers: (0..fan.num_faces()).flat_map(|s| fan.facets(s).iter().map(move |&(t, _)| [t, s])).collect(),
    });
    Ok(FanDocument {
        ambient_rank: fan.ambient_rank(),
        faces,
        maximal_cones,
        rays,
        ring: Some(wf.ring.to_string()),
        weights: Some(wf.input_weights.iter().map(WeightValue::from_rational).collect()),
    })
}

pub fn serialize_fan(wf: &WeightedFan) -> Result<String> {
    canonical(&fan_document(wf)?)
}

pub fn parse_matroid(text: &str) -> Result<Matroid> {
    let doc: MatroidDocument = serde_json::from_str(text).map_err(|e| json_error("matroid document", e))?;
    Matroid::new(doc.ground_size, &doc.bases)
}

pub fn read_matroid(path: &Path) -> Result<Matroid> {
    let text = read_text(path)?;
    parse_matroid(&text).map_err(|e| with_path(path, e))
}

pub fn serialize_matroid(m: &Matroid) -> Result<String> {
    canonical(&MatroidDocument { bases: m.bases(), ground_size: m.ground_size() })
}

/// The reduced star of `gamma` as a standalone document.
pub fn star_document(wf: &WeightedFan, gamma: usize) -> Result<String> {
    serialize_fan(&wf.reduced_star(gamma)?)
}
