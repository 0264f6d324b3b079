//! Space file format:
//! `{"points": [..], "metric": [[..]], "prob": [..]}` where each number is an
//! integer, a decimal literal or a `"p/q"` string.
//!
//! Crisp partition metrics may instead carry `"classes": [..]`, one class id
//! per point, which avoids a quadratic matrix for large generated models.

use serde_json::{json, Map, Value};

use super::{Frame, MetricProbSpace, PseudoMetric};
use crate::json::{self, FormatError};
use crate::rational::Rational;
use crate::Error;

/// Spaces above this many points are written with `"classes"` when their
/// metric allows it.
pub const DENSE_EMIT_LIMIT: usize = 1024;

pub fn space_from_json(text: &str) -> Result<MetricProbSpace, Error> {
    space_from_value(&json::parse(text)?)
}

pub fn space_from_value(v: &Value) -> Result<MetricProbSpace, Error> {
    let obj = json::object(v, "space")?;
    let points = json::strings(json::field(obj, "points")?, "points")?;
    let prob = json::rationals(json::field(obj, "prob")?, "prob")?;
    let frame = Frame::new(points)?;
    let metric = match (obj.get("metric"), obj.get("classes")) {
        (Some(m), _) => PseudoMetric::Matrix(
            json::array(m, "metric")?
                .iter()
                .map(|row| json::rationals(row, "metric row"))
                .collect::<Result<Vec<Vec<Rational>>, FormatError>>()?,
        ),
        (None, Some(c)) => PseudoMetric::Classes(
            json::array(c, "classes")?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| json::shape("classes: expected nonnegative integers"))
                })
                .collect::<Result<_, _>>()?,
        ),
        (None, None) => return Err(json::shape("missing field `metric`").into()),
    };
    Ok(MetricProbSpace::new(frame, metric, prob)?)
}

pub fn space_to_value(space: &MetricProbSpace) -> Value {
    let mut obj = Map::new();
    obj.insert("points".into(), json!(space.frame().names().collect::<Vec<_>>()));
    match space.metric() {
        PseudoMetric::Classes(c) if space.len() > DENSE_EMIT_LIMIT => {
            obj.insert("classes".into(), json!(c));
        }
        m => {
            let rows = m.to_matrix();
            obj.insert(
                "metric".into(),
                Value::Array(rows.iter().map(|r| json::rational_array(r)).collect()),
            );
        }
    }
    obj.insert("prob".into(), json::rational_array(space.prob()));
    Value::Object(obj)
}

pub fn space_to_json(space: &MetricProbSpace) -> String {
    json::to_pretty(&space_to_value(space))
}
