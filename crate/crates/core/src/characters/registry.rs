use serde_json::Value;

use super::DirichletCharacter;
use crate::error::{Error, Result};

/// Resolves a character label:
///
/// * `trivial` (or `1`): the trivial character modulo `default_modulus`;
/// * `quad<p>`: the Legendre symbol modulo an odd prime `p`;
/// * `char:<M>:<e1>,<e2>,...`: exponents on the canonical generators mod `M`.
pub fn character_from_label(label: &str, default_modulus: u64) -> Result<DirichletCharacter> {
    let label = label.trim();
    if label == "trivial" || label == "1" {
        return Ok(DirichletCharacter::trivial(default_modulus));
    }
    if let Some(p) = label.strip_prefix("quad") {
        let p: u64 = p
            .parse()
            .map_err(|_| Error::InvalidCharacter(format!("unknown character label {label:?}")))?;
        return DirichletCharacter::quadratic(p);
    }
    if let Some(rest) = label.strip_prefix("char:") {
        let (m, exps) = rest.split_once(':').unwrap_or((rest, ""));
        let m: u64 = m
            .parse()
            .map_err(|_| Error::InvalidCharacter(format!("bad modulus in {label:?}")))?;
        let exps = exps
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidCharacter(format!("bad exponents in {label:?}")))?;
        return DirichletCharacter::from_generator_exponents(m, &exps);
    }
    Err(Error::InvalidCharacter(format!("unknown character label {label:?}")))
}

/// A label string, a JSON character object, or `null` (trivial).
pub fn character_from_json(v: &Value, default_modulus: u64) -> Result<DirichletCharacter> {
    match v {
        Value::Null => Ok(DirichletCharacter::trivial(default_modulus)),
        Value::String(s) => character_from_label(s, default_modulus),
        Value::Object(_) => DirichletCharacter::from_json(v),
        _ => Err(Error::InvalidCharacter(format!("not a character: {v}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert!(character_from_label("trivial", 11).unwrap().is_trivial());
        assert_eq!(character_from_label("trivial", 11).unwrap().modulus(), 11);
        assert_eq!(character_from_label("quad5", 1).unwrap(), DirichletCharacter::quadratic(5).unwrap());
        let c = character_from_label("char:9:3", 1).unwrap();
        assert_eq!(c.conductor(), 3);
        assert!(character_from_label("quad4", 1).is_err());
        assert!(character_from_label("banana", 1).is_err());
        let back = character_from_json(&c.to_json(), 1).unwrap();
        assert_eq!(back, c);
    }
}
