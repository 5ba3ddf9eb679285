//! JSON formats for q-polymatroids and codes.
//!
//! A q-polymatroid is `{"q", "n", "r", "table"}` with ranks listed in
//! [`LatticeIndex`](crate::lattice::LatticeIndex) order, or
//! `{"q", "n", "r", "code_ref"}` where `code_ref` is a path (relative to the
//! referring file) or an inline code object. `{"named": "vamos"}` and
//! `{"named": "uniform", "k", "n"}` select built-in examples.
//!
//! A vector code is `{"field", "n", "generator"}` with entries written as
//! field elements (`"a^5+a^2+1"`, `"0"`, ...). A matrix code is a list of
//! row-major matrices over GF(2), or `{"field", "matrices"}` for other fields.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use crate::codes::{Code, CodeError, Matrix, MatrixCode, VectorCode};
use crate::field::{FieldError, GaloisField};
use crate::lattice::{AmbientSpace, LatticeError, Subspace};
use crate::qpm::{QPolymatroid, QpmError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Qpm(#[from] QpmError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

fn bad(msg: impl Into<String>) -> IoError {
    IoError::Malformed(msg.into())
}

/// What a CLI input file can hold.
#[derive(Debug, Clone)]
pub enum Input {
    Qpm(QPolymatroid),
    Code(Code),
}

impl Input {
    /// The q-polymatroid itself, or the one a code induces.
    pub fn qpm(&self) -> Result<QPolymatroid, IoError> {
        match self {
            Input::Qpm(m) => Ok(m.clone()),
            Input::Code(c) => Ok(c.induced_qpm()?),
        }
    }

    #[must_use]
    pub fn code(&self) -> Option<&Code> {
        match self {
            Input::Code(c) => Some(c),
            Input::Qpm(_) => None,
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json { path: path.to_path_buf(), source })
}

/// Loads a q-polymatroid or code from a file.
pub fn read_input(path: &Path) -> Result<Input, IoError> {
    let v = read_json(path)?;
    parse_input(&v, path.parent().unwrap_or(Path::new(".")))
}

/// `base` resolves relative `code_ref` paths.
pub fn parse_input(v: &Value, base: &Path) -> Result<Input, IoError> {
    if v.is_array() || v.get("generator").is_some() || v.get("matrices").is_some() {
        return Ok(Input::Code(parse_code(v)?));
    }
    Ok(Input::Qpm(parse_qpm(v, base)?))
}

fn get_usize(v: &Value, key: &str) -> Result<usize, IoError> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("missing or non-integer \"{key}\"")))
}

pub fn parse_qpm(v: &Value, base: &Path) -> Result<QPolymatroid, IoError> {
    if let Some(name) = v.get("named").and_then(Value::as_str) {
        let q = v.get("q").and_then(Value::as_u64).unwrap_or(2);
        let field = GaloisField::gf(q)?;
        return Ok(match name {
            "vamos" => QPolymatroid::vamos(field)?,
            "uniform" => QPolymatroid::uniform(field, get_usize(v, "k")?, get_usize(v, "n")?)?,
            other => return Err(bad(format!("unknown named q-polymatroid {other:?}"))),
        });
    }
    let m = if let Some(r) = v.get("code_ref") {
        let code = match r {
            Value::String(p) => {
                let path = base.join(p);
                let cv = read_json(&path)?;
                parse_code(&cv)?
            }
            other => parse_code(other)?,
        };
        code.induced_qpm()?
    } else {
        let q = get_usize(v, "q")? as u64;
        let n = get_usize(v, "n")?;
        let r = get_usize(v, "r")? as u32;
        let table = v
            .get("table")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("q-polymatroid needs \"table\", \"code_ref\" or \"named\""))?;
        let ranks = table
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| bad("ranks must be integers")))
            .collect::<Result<Vec<_>, _>>()?;
        let e = AmbientSpace::new(GaloisField::gf(q)?, n)?;
        return Ok(QPolymatroid::from_table(e, r, ranks)?);
    };
    for (key, want) in [("q", m.q() as u64), ("n", m.dim() as u64), ("r", u64::from(m.r()))] {
        if let Some(found) = v.get(key).and_then(Value::as_u64) {
            if found != want {
                return Err(bad(format!("\"{key}\" is {found} but the referenced code gives {want}")));
            }
        }
    }
    Ok(m)
}

/// Full rank table in enumeration order.
pub fn qpm_to_json(m: &QPolymatroid) -> Result<Value, IoError> {
    let ranks = m.ranks()?;
    Ok(json!({ "q": m.q(), "n": m.dim(), "r": m.r(), "table": ranks.as_slice() }))
}

fn parse_entry(field: &GaloisField, x: &Value) -> Result<crate::field::Elem, IoError> {
    match x {
        Value::String(s) => Ok(field.parse_elem(s)?),
        Value::Number(k) => Ok(field.parse_elem(&k.to_string())?),
        other => Err(bad(format!("bad field element {other}"))),
    }
}

fn parse_matrix(field: &GaloisField, v: &Value) -> Result<Matrix, IoError> {
    v.as_array()
        .ok_or_else(|| bad("matrix must be an array of rows"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad("matrix row must be an array"))?
                .iter()
                .map(|x| parse_entry(field, x))
                .collect()
        })
        .collect()
}

fn matrix_to_json(field: &GaloisField, x: &Matrix) -> Value {
    Value::Array(
        x.iter()
            .map(|row| Value::Array(row.iter().map(|&e| Value::String(field.format_elem(e))).collect()))
            .collect(),
    )
}

pub fn parse_code(v: &Value) -> Result<Code, IoError> {
    if let Some(gen) = v.get("generator") {
        let spec = v.get("field").and_then(Value::as_str).ok_or_else(|| bad("vector code needs \"field\""))?;
        let ext = GaloisField::parse_spec(spec)?;
        let n = get_usize(v, "n")?;
        let g = parse_matrix(&ext, gen)?;
        return Ok(Code::Vector(VectorCode::new(ext, n, g)?));
    }
    let (field, list) = match v {
        Value::Array(list) => (GaloisField::gf(2)?, list),
        _ => {
            let spec = v.get("field").and_then(Value::as_str).unwrap_or("GF(2)");
            let list = v
                .get("matrices")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("matrix code needs \"matrices\""))?;
            (GaloisField::parse_spec(spec)?, list)
        }
    };
    let basis = list.iter().map(|x| parse_matrix(&field, x)).collect::<Result<Vec<_>, _>>()?;
    let (n, m) = match (basis.first(), v.get("n"), v.get("m")) {
        (Some(b), _, _) => (b.len(), b.first().map_or(0, Vec::len)),
        (None, Some(n), Some(m)) => (
            n.as_u64().ok_or_else(|| bad("bad \"n\""))? as usize,
            m.as_u64().ok_or_else(|| bad("bad \"m\""))? as usize,
        ),
        _ => return Err(bad("an empty matrix code needs \"n\" and \"m\"")),
    };
    Ok(Code::Matrix(MatrixCode::new(field, n, m, basis)?))
}

pub fn code_to_json(c: &Code) -> Value {
    match c {
        Code::Vector(c) => json!({
            "field": c.ext().spec_string(),
            "n": c.n(),
            "generator": matrix_to_json(c.ext(), c.generator()),
        }),
        Code::Matrix(c) => {
            let mats: Vec<Value> = c.basis().iter().map(|b| matrix_to_json(c.field(), b)).collect();
            json!({ "field": c.field().spec_string(), "n": c.n(), "m": c.m(), "matrices": mats })
        }
    }
}

/// Rows separated by commas or whitespace, e.g. `1000,0100`.
pub fn parse_subspace_arg(e: &AmbientSpace, text: &str) -> Result<Subspace, IoError> {
    let rows: Vec<&str> = text.split([',', ' ', ';']).filter(|s| !s.is_empty()).collect();
    Ok(e.parse_subspace(&rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_code_round_trip() {
        let v = json!({
            "field": "GF(2^2)/x^2+x+1",
            "n": 4,
            "generator": [["1", "a", "0", "0"], ["0", "0", "1", "a"]],
        });
        let c = parse_code(&v).unwrap();
        let back = parse_code(&code_to_json(&c)).unwrap();
        assert_eq!(c.weight_distribution().unwrap(), back.weight_distribution().unwrap());
    }

    #[test]
    fn bare_matrix_list_is_binary() {
        let v = json!([[[1, 0], [0, 1]], [[0, 1], [1, 1]]]);
        let Input::Code(Code::Matrix(c)) = parse_input(&v, Path::new(".")).unwrap() else { panic!() };
        assert_eq!((c.n(), c.m(), c.k(), c.q()), (2, 2, 2, 2));
    }

    #[test]
    fn table_round_trip() {
        let m = QPolymatroid::uniform(GaloisField::gf(2).unwrap(), 2, 4).unwrap();
        let back = parse_qpm(&qpm_to_json(&m).unwrap(), Path::new(".")).unwrap();
        assert!(m.equals(&back).unwrap());
    }

    #[test]
    fn inline_code_ref() {
        let v = json!({"q": 2, "n": 2, "r": 2, "code_ref": [[[1, 0], [0, 1]]]});
        let m = parse_qpm(&v, Path::new(".")).unwrap();
        assert_eq!((m.dim(), m.r()), (2, 2));
        let wrong = json!({"q": 2, "n": 3, "code_ref": [[[1, 0], [0, 1]]]});
        assert!(parse_qpm(&wrong, Path::new(".")).is_err());
    }
}
