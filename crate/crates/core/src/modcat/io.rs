//! JSON encoding of modules: `{algebra, dim, action, name}` with one
//! row-major matrix per algebra basis element.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use super::Module;
use crate::algebra::{parse_scalar_value, scalar_to_value, Algebra};
use crate::xfield::Matrix;
use crate::{Error, Result};

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Format { path: path.to_string(), message: message.into() }
}

fn matrix_to_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_to_value).collect())).collect())
}

pub fn module_to_json(m: &Module) -> Value {
    json!({
        "algebra": m.algebra().name(),
        "dim": m.dim(),
        "name": m.name().unwrap_or(""),
        "action": m.actions().iter().map(matrix_to_value).collect::<Vec<_>>(),
    })
}

/// Decodes and validates a module over `algebra`. The `algebra` field must
/// name it.
pub fn module_from_json(algebra: &Arc<Algebra>, v: &Value) -> Result<Module> {
    let obj = v.as_object().ok_or_else(|| err("$", "expected a JSON object"))?;
    let alg_name = obj.get("algebra").and_then(Value::as_str).ok_or_else(|| err("algebra", "missing algebra name"))?;
    if alg_name != algebra.name() {
        return Err(err("algebra", format!("module is over `{alg_name}` but the algebra is `{}`", algebra.name())));
    }
    let dim = obj.get("dim").and_then(Value::as_u64).ok_or_else(|| err("dim", "expected a nonnegative integer"))? as usize;
    let acts = obj.get("action").and_then(Value::as_array).ok_or_else(|| err("action", "expected an array of matrices"))?;
    if acts.len() != algebra.dim() {
        return Err(err("action", format!("{} matrices for an algebra of dimension {}", acts.len(), algebra.dim())));
    }
    let f = algebra.field();
    let mut action = Vec::with_capacity(acts.len());
    for (b, m) in acts.iter().enumerate() {
        let path = format!("action[{b}]");
        let rows = m.as_array().ok_or_else(|| err(&path, "expected an array of rows"))?;
        if rows.len() != dim {
            return Err(err(&path, format!("{} rows, expected {dim}", rows.len())));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, r) in rows.iter().enumerate() {
            let rp = format!("{path}[{i}]");
            let r = r.as_array().ok_or_else(|| err(&rp, "expected an array of scalars"))?;
            if r.len() != dim {
                return Err(err(&rp, format!("{} entries, expected {dim}", r.len())));
            }
            for (j, x) in r.iter().enumerate() {
                data.push(parse_scalar_value(f, x, &format!("{rp}[{j}]"))?);
            }
        }
        action.push(Matrix::from_rows(f, dim, dim, data));
    }
    let module = Module::new(algebra.clone(), dim, action).map_err(|e| err("action", e.to_string()))?;
    Ok(match obj.get("name").and_then(Value::as_str) {
        Some(n) if !n.is_empty() => module.with_name(n),
        _ => module,
    })
}

pub fn load_module(algebra: &Arc<Algebra>, path: &Path) -> Result<Module> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| err(&path.display().to_string(), format!("malformed JSON: {e}")))?;
    module_from_json(algebra, &v).map_err(|e| match e {
        Error::Format { path: p, message } => Error::Format { path: format!("{}: {p}", path.display()), message },
        other => other,
    })
}

pub fn save_module(m: &Module, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&module_to_json(m)).expect("JSON values serialize");
    std::fs::write(path, text + "\n")?;
    Ok(())
}
