//! JSON input/output for the CLI. Matrices are row-major arrays of
//! `[re, im]` pairs under a top-level versioned schema key.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::Value;

use plie_core::poisson::FramedSkewMatrix;
use plie_core::{Error, Result};

pub const SCHEMA: &str = "plie/1";

pub fn matrix_json(m: &DMatrix<Complex64>) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::json!(rows)
}

pub fn framed_json(f: &FramedSkewMatrix) -> Value {
    let rows: Vec<Vec<f64>> = (0..f.dim())
        .map(|i| (0..f.dim()).map(|j| f.entries()[(i, j)]).collect())
        .collect();
    serde_json::json!({
        "frame": f.frame(),
        "base_point": f.base_point(),
        "entries": rows,
    })
}

/// Reads a complex square matrix from JSON: either a bare row-major array of
/// `[re, im]` pairs, or an object with a "matrix" key holding one.
pub fn read_matrix(path: &Path) -> Result<DMatrix<Complex64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("malformed JSON in {}: {e}", path.display())))?;
    let rows = value
        .get("matrix")
        .unwrap_or(&value)
        .as_array()
        .ok_or_else(|| Error::InvalidArgument("expected an array of rows".into()))?
        .clone();
    let n = rows.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let cols = row
            .as_array()
            .ok_or_else(|| Error::InvalidArgument(format!("row {i} is not an array")))?;
        if cols.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: cols.len() });
        }
        for (j, entry) in cols.iter().enumerate() {
            m[(i, j)] = parse_entry(entry)
                .ok_or_else(|| Error::InvalidArgument(format!("bad entry at ({i},{j})")))?;
        }
    }
    Ok(m)
}

fn parse_entry(v: &Value) -> Option<Complex64> {
    if let Some(x) = v.as_f64() {
        return Some(Complex64::new(x, 0.0));
    }
    let pair = v.as_array()?;
    if pair.len() != 2 {
        return None;
    }
    Some(Complex64::new(pair[0].as_f64()?, pair[1].as_f64()?))
}

pub fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Internal(format!("serialization: {e}")))?;
    emit_text(&(text + "\n"), out)
}

pub fn emit_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
