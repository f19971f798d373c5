//! Point-set files and text helpers.
//!
//! Coordinates are written as canonical `"p/q"` strings; on input both bare
//! JSON integers and `"p/q"` strings are accepted.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::discrepancy::WeightedPointSet;
use crate::error::{Error, Result};
use crate::geometry::{format_scalar, parse_scalar, Point, PointSequence, Scalar};

pub(crate) fn serialize_point<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(p.dim()))?;
    for c in p.coords() {
        seq.serialize_element(&format_scalar(c))?;
    }
    seq.end()
}

pub(crate) fn serialize_scalar<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(x))
}

/// On-disk point set: `{"dim": d, "points": [[...], ...], "multiplicities": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub dim: usize,
    pub points: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<u64>>,
}

fn parse_coord(v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            let i: BigInt = n
                .to_string()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("coordinate {n} is not an integer")))?;
            Ok(Scalar::from_integer(i))
        }
        Value::String(s) => parse_scalar(s),
        other => Err(Error::InvalidInput(format!("bad coordinate {other}"))),
    }
}

impl PointSetFile {
    pub fn from_points(seq: &PointSequence) -> Self {
        PointSetFile {
            dim: seq.dim(),
            points: seq
                .iter()
                .map(|p| p.coords().iter().map(|c| Value::String(format_scalar(c))).collect())
                .collect(),
            multiplicities: None,
        }
    }

    pub fn from_weighted(a: &WeightedPointSet) -> Self {
        PointSetFile {
            dim: a.dim(),
            points: a
                .entries()
                .iter()
                .map(|(p, _)| p.coords().iter().map(|c| Value::String(format_scalar(c))).collect())
                .collect(),
            multiplicities: Some(a.entries().iter().map(|(_, m)| *m).collect()),
        }
    }

    fn parsed_points(&self) -> Result<Vec<Point>> {
        self.points
            .iter()
            .map(|row| {
                if row.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        found: row.len(),
                    });
                }
                Ok(Point::new(row.iter().map(parse_coord).collect::<Result<_>>()?))
            })
            .collect()
    }

    pub fn to_points(&self) -> Result<PointSequence> {
        PointSequence::new(self.dim, self.parsed_points()?)
    }

    /// Weighted view; missing multiplicities mean weight one per point.
    pub fn to_weighted(&self) -> Result<WeightedPointSet> {
        let pts = self.parsed_points()?;
        let mult = match &self.multiplicities {
            Some(m) if m.len() != pts.len() => {
                return Err(Error::InvalidInput(format!(
                    "{} multiplicities for {} points",
                    m.len(),
                    pts.len()
                )))
            }
            Some(m) => m.clone(),
            None => vec![1; pts.len()],
        };
        WeightedPointSet::new(self.dim, pts.into_iter().zip(mult).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }
}

/// Writes via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidInput(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
