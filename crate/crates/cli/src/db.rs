//! Eigenform lookup: JSON records under `RANKIN_DATA_DIR`, then the built-in forms.

use std::cell::RefCell;
use std::collections::HashMap;
use std::path::PathBuf;

use rankin_core::forms::{builtin, builtin_level, default_prime};
use rankin_core::Eigenform;
use serde_json::Value;

use crate::Failure;

pub const DATA_DIR_VAR: &str = "RANKIN_DATA_DIR";

/// Records are read and parsed on first use and kept for the rest of the run.
pub struct FormDatabase {
    dir: Option<PathBuf>,
    records: RefCell<HashMap<String, Option<Value>>>,
}

/// `label` or `label@p`.
pub fn split_label(name: &str) -> Result<(&str, Option<u64>), Failure> {
    match name.rsplit_once('@') {
        None => Ok((name, None)),
        Some((label, p)) => {
            let p = p
                .parse()
                .map_err(|_| Failure::Usage(format!("bad prime in form label {name:?}")))?;
            Ok((label, Some(p)))
        }
    }
}

impl FormDatabase {
    pub fn from_env() -> Self {
        let dir = std::env::var_os(DATA_DIR_VAR).map(PathBuf::from);
        FormDatabase { dir, records: RefCell::new(HashMap::new()) }
    }

    fn record(&self, label: &str) -> Result<Option<Value>, Failure> {
        if let Some(hit) = self.records.borrow().get(label) {
            return Ok(hit.clone());
        }
        let mut found = None;
        if let Some(dir) = &self.dir {
            if label.contains(['/', '\\']) || label.starts_with('.') {
                return Err(Failure::Usage(format!("invalid form label {label:?}")));
            }
            let path = dir.join(format!("{label}.json"));
            if path.is_file() {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
                let v: Value = serde_json::from_str(&text)
                    .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
                found = Some(v);
            }
        }
        self.records.borrow_mut().insert(label.to_string(), found.clone());
        Ok(found)
    }

    /// Resolves `label[@p]`. The prime is taken from the label suffix, then
    /// `p`, then the record, then the smallest prime not dividing the level.
    /// Built-in forms carry eigenvalues for primes below `prime_bound`.
    pub fn get(&self, name: &str, p: Option<u64>, prime_bound: u64) -> Result<Eigenform, Failure> {
        let (label, at) = split_label(name)?;
        let p = at.or(p);
        if let Some(mut v) = self.record(label)? {
            if let (Some(p), Some(obj)) = (p, v.as_object_mut()) {
                if obj.get("p").and_then(Value::as_u64) != Some(p) {
                    if obj.get("crystalline") == Some(&Value::Bool(false)) {
                        return Err(Failure::Usage(format!("{label} is not crystalline; its prime is fixed by the record")));
                    }
                    // roots belong to the old prime
                    obj.insert("p".into(), Value::from(p));
                    obj.remove("alpha");
                    obj.remove("beta");
                }
            }
            return Eigenform::from_json(&v).map_err(|e| Failure::Data(format!("{label}: {e}")));
        }
        let level = builtin_level(label)
            .ok_or_else(|| Failure::Data(format!("unknown form {label:?} (not in {DATA_DIR_VAR} and not built in)")))?;
        let p = p.unwrap_or_else(|| default_prime(level));
        builtin(label, p, prime_bound)
            .expect("known label")
            .map_err(|e| Failure::Data(format!("{label}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_with_primes() {
        assert_eq!(split_label("11.2.a.a").unwrap(), ("11.2.a.a", None));
        assert_eq!(split_label("1.12.a.a@5").unwrap(), ("1.12.a.a", Some(5)));
        assert!(split_label("1.12.a.a@x").is_err());
    }

    #[test]
    fn builtin_fallback() {
        let db = FormDatabase { dir: None, records: RefCell::new(HashMap::new()) };
        assert_eq!(db.get("11.2.a.a", None, 20).unwrap().p(), 2);
        assert_eq!(db.get("Delta@7", None, 20).unwrap().p(), 7);
        assert!(matches!(db.get("11.2.a.a@11", None, 20), Err(Failure::Data(_))));
    }
}
