//! Verdict records shared by the checks.

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

/// `{"claim", "range", "pass", "details"}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub range: Value,
    pub pass: bool,
    pub details: Value,
}

impl Verdict {
    pub fn new(claim: impl Into<String>, range: Value, pass: bool, details: Value) -> Self {
        Verdict {
            claim: claim.into(),
            range,
            pass,
            details,
        }
    }
}

/// Integers print as numbers, other rationals as `"p/q"`.
pub fn rational_json(r: &Ratio<i64>) -> Value {
    if r.is_integer() {
        json!(r.to_integer())
    } else {
        json!(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub(crate) fn serialize_rational<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
    rational_json(r).serialize(s)
}
