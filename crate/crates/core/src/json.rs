//! Shared helpers for the JSON file formats.

use serde_json::{Map, Value};

use crate::rational::{self, ParseRationalError, Rational};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Number(#[from] ParseRationalError),
}

pub(crate) fn shape(msg: impl Into<String>) -> FormatError {
    FormatError::Shape(msg.into())
}

pub(crate) fn parse(text: &str) -> Result<Value, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub(crate) fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object()
        .ok_or_else(|| shape(format!("{what}: expected a JSON object")))
}

pub(crate) fn field<'a>(
    obj: &'a Map<String, Value>,
    key: &str,
) -> Result<&'a Value, FormatError> {
    obj.get(key)
        .ok_or_else(|| shape(format!("missing field `{key}`")))
}

pub(crate) fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array()
        .ok_or_else(|| shape(format!("{what}: expected an array")))
}

pub(crate) fn strings(v: &Value, what: &str) -> Result<Vec<String>, FormatError> {
    array(v, what)?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| shape(format!("{what}: expected strings")))
        })
        .collect()
}

pub(crate) fn rationals(v: &Value, what: &str) -> Result<Vec<Rational>, FormatError> {
    array(v, what)?
        .iter()
        .map(|x| Ok(rational::from_json(x)?))
        .collect()
}

pub(crate) fn rational_array(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(rational::to_json).collect())
}

/// Serializes with two-space indentation and a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
