//! Dense complex matrices and their JSON form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `A − (tr A / n) I`.
pub fn traceless_part(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let shift = a.trace() / n as f64;
    let mut out = a.clone();
    for i in 0..n {
        out[(i, i)] -= shift;
    }
    out
}

/// Largest entrywise modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

/// `max |A + A†|`, zero exactly for anti-hermitian matrices.
pub fn anti_hermitian_defect(a: &CMatrix) -> f64 {
    max_abs(&(a + a.adjoint()))
}

/// Serialises as `{"n": n, "re": [[...], ...], "im": [[...], ...]}` with rows outermost.
pub fn matrix_to_json(a: &CMatrix) -> Value {
    let rows = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..a.nrows())
            .map(|i| (0..a.ncols()).map(|j| part(&a[(i, j)])).collect())
            .collect()
    };
    json!({ "n": a.nrows(), "re": rows(|c| c.re), "im": rows(|c| c.im) })
}

pub fn matrix_from_json(value: &Value) -> Result<CMatrix> {
    let bad = |msg: &str| Error::Format(msg.to_string());
    let n = value
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing integer `n`"))? as usize;
    let read = |key: &str| -> Result<Vec<f64>> {
        let rows = value
            .get(key)
            .and_then(Value::as_array)
            .filter(|r| r.len() == n)
            .ok_or_else(|| bad(&format!("`{key}` must be an array of {n} rows")))?;
        let mut out = Vec::with_capacity(n * n);
        for row in rows {
            let row = row
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| bad(&format!("rows of `{key}` must hold {n} entries")))?;
            for v in row {
                out.push(v.as_f64().ok_or_else(|| bad("entries must be numbers"))?);
            }
        }
        Ok(out)
    };
    let re = read("re")?;
    let im = read("im")?;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(re[i * n + j], im[i * n + j])
    }))
}
