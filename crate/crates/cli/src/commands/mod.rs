pub mod montecarlo;
pub mod repeater;
pub mod sweep;
pub mod verify;

use serde_json::Value;

use crate::report::num;

pub(crate) fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}
