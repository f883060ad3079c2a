//! JSON interchange for point sets and certificates.
//!
//! A point set is `{"points": [[nx, dx, ny, dy], ...]}` or, for integer
//! coordinates, the shorthand `[[x, y], ...]`. Certificates are the
//! [`Certificate`] enum tagged by `kind`; a result object carrying a
//! `certificate` field is accepted too.

use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::families::Certificate;
use crate::geom::{Point, PointId, PointSet};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct PointsFile {
    points: Vec<Point>,
}

fn schema(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("schema: {e}"))
}

/// Parses either point-set form. Repeated points are rejected.
pub fn parse_points(text: &str) -> Result<PointSet> {
    let v: Value = serde_json::from_str(text).map_err(schema)?;
    let points: Vec<Point> = match v {
        Value::Array(_) => serde_json::from_value(v).map_err(schema)?,
        Value::Object(_) => serde_json::from_value::<PointsFile>(v).map_err(schema)?.points,
        _ => return Err(schema("expected an array or an object with \"points\"")),
    };
    PointSet::new(points)
}

/// The canonical `{"points": ...}` form.
pub fn points_json(set: &PointSet, indent: Option<usize>) -> Result<String> {
    to_json(&PointsFile { points: set.points().to_vec() }, indent)
}

/// Serializes a [`PointSet`] as its list of points.
pub fn serialize_points<S: Serializer>(set: &PointSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    set.points().serialize(s)
}

/// Serializes a rational as `"n/d"`.
pub fn serialize_ratio<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// JSON text with `indent` spaces per level, or compact when `None`.
pub fn to_json<T: Serialize + ?Sized>(value: &T, indent: Option<usize>) -> Result<String> {
    let Some(width) = indent else {
        return serde_json::to_string(value).map_err(|e| Error::InvalidInput(e.to_string()));
    };
    let pad = vec![b' '; width];
    let mut out = Vec::new();
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value.serialize(&mut ser).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Parses a certificate, bare or inside a result object.
pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut v: Value = serde_json::from_str(text).map_err(schema)?;
    if let Some(inner) = v.get_mut("certificate") {
        if inner.get("kind").is_some() {
            v = inner.take();
        }
    }
    serde_json::from_value(v).map_err(schema)
}

/// Every point id mentioned by the certificate.
pub fn certificate_ids(c: &Certificate) -> Vec<PointId> {
    match c {
        Certificate::CrossingFamily(f) => {
            let mut ids: Vec<PointId> = f.segments.iter().flat_map(|&(a, b)| [a, b]).collect();
            if let Some(sides) = &f.sides {
                ids.extend(sides.iter().flatten());
            }
            ids
        }
        Certificate::NoncrossingFamily(f) => f.parts.iter().flatten().copied().collect(),
        Certificate::ConvexBundle(b) => b
            .parts
            .iter()
            .flatten()
            .chain(&b.certificate.witness)
            .copied()
            .collect(),
        Certificate::SpokeSet(_) => Vec::new(),
    }
}

/// Rejects certificates that name points outside `set`.
pub fn check_ids(c: &Certificate, set: &PointSet) -> Result<()> {
    match certificate_ids(c).into_iter().find(|&id| !set.contains(id)) {
        Some(id) => Err(schema(format!("point id {} out of range for {} points", id.0, set.len()))),
        None => Ok(()),
    }
}
