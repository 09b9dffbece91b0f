//! JSON encoding of algebra presentations.
//!
//! Scalars are integers for prime fields and strings such as `"3/7"` for the
//! rationals (integers are also accepted on input). Errors carry a path to
//! the offending field.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::{Algebra, AlgebraPresentation};
use crate::xfield::{FieldSpec, Scalar};
use crate::{Error, Result};

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Format { path: path.to_string(), message: message.into() }
}

pub fn scalar_to_value(s: &Scalar) -> Value {
    match s {
        Scalar::Mod(x) => Value::from(x.value()),
        Scalar::Rat(_) => Value::from(s.to_string()),
    }
}

pub fn parse_scalar_value(field: FieldSpec, v: &Value, path: &str) -> Result<Scalar> {
    match (field, v) {
        (FieldSpec::Prime(_), Value::Number(n)) => {
            let n = n.as_i64().ok_or_else(|| err(path, format!("`{n}` is not an integer")))?;
            Ok(field.from_i64(n))
        }
        (FieldSpec::Rational, Value::String(s)) => field.parse(s).map_err(|e| err(path, e.to_string())),
        (FieldSpec::Rational, Value::Number(n)) => {
            let n = n.as_i64().ok_or_else(|| err(path, format!("`{n}` is not an integer; use a string")))?;
            Ok(field.from_i64(n))
        }
        (FieldSpec::Prime(_), _) => Err(err(path, "expected an integer")),
        (FieldSpec::Rational, _) => Err(err(path, "expected a rational string such as \"3/7\"")),
    }
}

pub(crate) fn parse_vector(field: FieldSpec, v: &Value, path: &str) -> Result<Vec<Scalar>> {
    let arr = v.as_array().ok_or_else(|| err(path, "expected an array of scalars"))?;
    arr.iter().enumerate().map(|(i, x)| parse_scalar_value(field, x, &format!("{path}[{i}]"))).collect()
}

pub(crate) fn vector_to_value(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_value).collect())
}

pub(crate) fn parse_field(v: &Value, path: &str) -> Result<FieldSpec> {
    match v {
        Value::String(s) if s == "rational" => Ok(FieldSpec::Rational),
        Value::Object(m) => {
            let p = m
                .get("prime")
                .and_then(Value::as_u64)
                .ok_or_else(|| err(path, "expected {\"prime\": p} or \"rational\""))?;
            FieldSpec::prime(p).map_err(|e| err(&format!("{path}.prime"), e.to_string()))
        }
        _ => Err(err(path, "expected {\"prime\": p} or \"rational\"")),
    }
}

pub(crate) fn field_to_value(f: FieldSpec) -> Value {
    match f {
        FieldSpec::Prime(p) => json!({ "prime": p }),
        FieldSpec::Rational => Value::from("rational"),
    }
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(key, "missing field"))
}

/// Decodes a presentation (without validating it).
pub fn algebra_from_json(v: &Value) -> Result<AlgebraPresentation> {
    let obj = v.as_object().ok_or_else(|| err("$", "expected a JSON object"))?;
    let field = parse_field(get(obj, "field")?, "field")?;
    let dim = get(obj, "dim")?.as_u64().ok_or_else(|| err("dim", "expected a nonnegative integer"))? as usize;
    let basis = get(obj, "basis")?
        .as_array()
        .ok_or_else(|| err("basis", "expected an array of labels"))?
        .iter()
        .enumerate()
        .map(|(i, x)| x.as_str().map(str::to_string).ok_or_else(|| err(&format!("basis[{i}]"), "expected a string")))
        .collect::<Result<Vec<_>>>()?;
    let unit = parse_vector(field, get(obj, "unit")?, "unit")?;
    let table_v = get(obj, "table")?.as_array().ok_or_else(|| err("table", "expected an array"))?;
    let mut table = Vec::with_capacity(table_v.len());
    for (i, row) in table_v.iter().enumerate() {
        let path = format!("table[{i}]");
        let row = row.as_array().ok_or_else(|| err(&path, "expected an array"))?;
        let parsed =
            row.iter().enumerate().map(|(j, c)| parse_vector(field, c, &format!("{path}[{j}]"))).collect::<Result<Vec<_>>>()?;
        table.push(parsed);
    }
    let list = |key: &str| -> Result<Vec<Vec<Scalar>>> {
        get(obj, key)?
            .as_array()
            .ok_or_else(|| err(key, "expected an array of coordinate vectors"))?
            .iter()
            .enumerate()
            .map(|(i, x)| parse_vector(field, x, &format!("{key}[{i}]")))
            .collect()
    };
    let idempotents = list("idempotents")?;
    let radical = list("radical")?;
    let name = obj.get("name").and_then(Value::as_str).unwrap_or("unnamed").to_string();
    let provenance = obj.get("provenance").and_then(Value::as_str).unwrap_or("").to_string();
    Ok(AlgebraPresentation { name, provenance, field, dim, basis, table, unit, idempotents, radical })
}

pub fn algebra_to_json(p: &AlgebraPresentation) -> Value {
    json!({
        "name": p.name,
        "provenance": p.provenance,
        "field": field_to_value(p.field),
        "dim": p.dim,
        "basis": p.basis,
        "unit": vector_to_value(&p.unit),
        "table": p.table.iter().map(|row| row.iter().map(|v| vector_to_value(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "idempotents": p.idempotents.iter().map(|v| vector_to_value(v)).collect::<Vec<_>>(),
        "radical": p.radical.iter().map(|v| vector_to_value(v)).collect::<Vec<_>>(),
    })
}

/// Reads, decodes and validates an algebra file.
pub fn load_algebra(path: &Path) -> Result<Arc<Algebra>> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| err(&path.display().to_string(), format!("malformed JSON: {e}")))?;
    let pres = algebra_from_json(&v).map_err(|e| match e {
        Error::Format { path: p, message } => Error::Format { path: format!("{}: {p}", path.display()), message },
        other => other,
    })?;
    Algebra::new(pres)
}

pub fn save_algebra(p: &AlgebraPresentation, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&algebra_to_json(p)).expect("JSON values serialize");
    std::fs::write(path, text + "\n")?;
    Ok(())
}
