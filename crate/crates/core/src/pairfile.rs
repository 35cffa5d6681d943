//! JSON pair files.
//!
//! ```json
//! {"P": [["1","0"],["0","0"]], "Q": [["1","1"],["0","0"]], "dim": 2, "field": "rational"}
//! ```
//!
//! Rational entries are strings (`"a/b"` or an integer); float entries are
//! JSON numbers. Output keys are sorted and rationals are written in lowest
//! terms, so rational files round-trip byte for byte.

use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pair::{make_pair, ProjectionPair};
use crate::scalar::{Field, Rational, Scalar, TolerancePolicy};

#[derive(Debug, Clone)]
pub enum AnyPair {
    Rational(ProjectionPair<Rational>),
    Float(ProjectionPair<f64>),
}

impl AnyPair {
    pub fn field(&self) -> Field {
        match self {
            AnyPair::Rational(_) => Field::Rational,
            AnyPair::Float(_) => Field::Float,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyPair::Rational(p) => p.dim(),
            AnyPair::Float(p) => p.dim(),
        }
    }

    pub fn to_json_string(&self) -> String {
        match self {
            AnyPair::Rational(p) => pair_to_json_string(p),
            AnyPair::Float(p) => pair_to_json_string(p),
        }
    }
}

impl From<ProjectionPair<Rational>> for AnyPair {
    fn from(p: ProjectionPair<Rational>) -> Self {
        AnyPair::Rational(p)
    }
}

impl From<ProjectionPair<f64>> for AnyPair {
    fn from(p: ProjectionPair<f64>) -> Self {
        AnyPair::Float(p)
    }
}

fn matrix_to_json<T: Scalar>(m: &Matrix<T>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(Scalar::to_json).collect()))
            .collect(),
    )
}

pub fn pair_to_json<T: Scalar>(pair: &ProjectionPair<T>) -> Value {
    json!({
        "dim": pair.dim(),
        "field": T::FIELD,
        "P": matrix_to_json(pair.p()),
        "Q": matrix_to_json(pair.q()),
    })
}

/// Pretty-printed with a trailing newline.
pub fn pair_to_json_string<T: Scalar>(pair: &ProjectionPair<T>) -> String {
    let mut s = serde_json::to_string_pretty(&pair_to_json(pair)).expect("serializable");
    s.push('\n');
    s
}

fn matrix_from_json<T: Scalar>(v: &Value, name: &str, dim: usize) -> Result<Matrix<T>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::PairFile(format!("\"{name}\" must be an array of rows")))?;
    if rows.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "\"{name}\" has {} rows, expected {dim}",
            rows.len()
        )));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::PairFile(format!("\"{name}\" row {i} is not an array")))?;
        if row.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "\"{name}\" row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        for entry in row {
            data.push(T::from_json(entry)?);
        }
    }
    Matrix::from_vec(dim, dim, data)
}

fn typed<T: Scalar>(obj: &Value, dim: usize, pol: TolerancePolicy) -> Result<ProjectionPair<T>> {
    let p = matrix_from_json(&obj["P"], "P", dim)?;
    let q = matrix_from_json(&obj["Q"], "Q", dim)?;
    make_pair(p, q, pol)
}

/// Parses and validates a pair file: shape, field consistency, idempotency.
pub fn parse_pair(text: &str, pol: TolerancePolicy) -> Result<AnyPair> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::PairFile("top level must be an object".into()))?;
    for key in ["dim", "field", "P", "Q"] {
        if !obj.contains_key(key) {
            return Err(Error::PairFile(format!("missing key \"{key}\"")));
        }
    }
    let dim = obj["dim"]
        .as_u64()
        .ok_or_else(|| Error::PairFile("\"dim\" must be a nonnegative integer".into()))?
        as usize;
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let field: Field = serde_json::from_value(obj["field"].clone())
        .map_err(|_| Error::PairFile("\"field\" must be \"rational\" or \"float\"".into()))?;
    Ok(match field {
        Field::Rational => AnyPair::Rational(typed(&v, dim, pol)?),
        Field::Float => AnyPair::Float(typed(&v, dim, pol)?),
    })
}

pub fn read_pair(path: &Path, pol: TolerancePolicy) -> Result<AnyPair> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::PairFile(format!("{}: {e}", path.display())))?;
    parse_pair(&text, pol)
}

pub fn write_pair(path: &Path, pair: &AnyPair) -> Result<()> {
    std::fs::write(path, pair.to_json_string())
        .map_err(|e| Error::PairFile(format!("{}: {e}", path.display())))
}
