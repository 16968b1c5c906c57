//! Number formatting shared by the JSON and CSV writers.

use std::str::FromStr;

use serde_json::{Number, Value};

/// 17 significant digits in scientific notation, `.` as decimal point.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A JSON number carrying exactly the text of [`float`]; `null` if not finite.
pub fn json_float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&float(x)).expect("valid JSON number"))
}

pub fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_float)
}
