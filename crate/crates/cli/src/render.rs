use rankin_core::{CycloNumber, QExpansion, QuadNumber};
use serde_json::Value;

/// Integers as JSON numbers, other rationals as `"num/den"`, everything else
/// in the `{"M", "coeffs"}` form.
pub fn cyclo(c: &CycloNumber) -> Value {
    match c.to_rational() {
        Some(q) if q.is_integer() => {
            let text = q.to_string();
            text.parse::<serde_json::Number>().map(Value::Number).unwrap_or(Value::String(text))
        }
        Some(q) => Value::String(q.to_string()),
        None => c.to_json(),
    }
}

pub fn quad(q: &QuadNumber) -> Value {
    match q.as_cyclo() {
        Some(c) => cyclo(c),
        None => serde_json::json!({
            "a": cyclo(q.rational_part()),
            "b": cyclo(q.radical_coeff()),
            "D": q.radicand().map(cyclo).unwrap_or(Value::Null),
        }),
    }
}

pub fn series(f: &QExpansion<QuadNumber>) -> Value {
    Value::Array(f.coeffs().iter().map(quad).collect())
}

pub fn series_pretty(f: &QExpansion<QuadNumber>) -> Vec<String> {
    f.coeffs().iter().enumerate().map(|(n, a)| format!("a_{n} = {a}")).collect()
}
