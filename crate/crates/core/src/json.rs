//! JSON helpers for arbitrary-precision integers.
//!
//! Integers are written as plain JSON numbers of any magnitude.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serializer;
use serde_json::{json, Number, Value};

use crate::matrix::IntMatrix;

pub fn big_to_value(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer literal is a JSON number"))
}

pub fn bigints_to_value(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big_to_value).collect())
}

pub fn value_to_big(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).ok(),
        Value::String(s) => BigInt::from_str(s.trim()).ok(),
        _ => None,
    }
}

pub fn matrix_to_value(m: &IntMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows()).map(|i| bigints_to_value(m.row(i))).collect();
    json!({ "rows": rows })
}

/// Accepts `{"rows": [[...]]}` or a bare array of rows.
pub fn matrix_from_value(v: &Value) -> Result<IntMatrix, String> {
    let rows = match v {
        Value::Object(map) => map.get("rows").ok_or("missing `rows` field")?,
        Value::Array(_) => v,
        _ => return Err("expected an object with `rows` or an array of rows".into()),
    };
    let rows = rows.as_array().ok_or("`rows` must be an array")?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| format!("row {i} is not an array"))?;
        let mut parsed = Vec::with_capacity(row.len());
        for (j, x) in row.iter().enumerate() {
            parsed.push(value_to_big(x).ok_or_else(|| format!("entry ({i}, {j}) is not an integer"))?);
        }
        out.push(parsed);
    }
    IntMatrix::from_rows(out).map_err(|e| e.to_string())
}

pub(crate) fn ser_big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&big_to_value(x), s)
}

pub(crate) fn ser_bigs<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&bigints_to_value(xs), s)
}

pub(crate) fn ser_opt_bigs<S: Serializer>(xs: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match xs {
        Some(xs) => ser_bigs(xs, s),
        None => s.serialize_none(),
    }
}
