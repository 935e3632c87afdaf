//! `qexp` descriptions: a kind followed by `key=value` pairs, e.g.
//! `eisE k=2 N=4 p=3`, `scriptE k1=12 k2=2 j=10 chi=quad3 N=4`,
//! `tildeE k1=12 k2=2 j=10 chi=quad3`, `form 11.2.a.a stab=alpha`.
//!
//! Every kind also takes `theta=<t>` (with optional `theta_chi=<label>`) to
//! apply `theta^(t + chi)` to the result.

use std::collections::BTreeMap;

use rankin_core::eisenstein::{eis_e, eis_f, eis_script, eis_tilde};
use rankin_core::{DirichletCharacter, LocAlgChar, QExpansion, QuadNumber};

use crate::db::FormDatabase;
use crate::{parse_character, stabilise, Failure};

pub struct Parsed {
    kind: String,
    label: Option<String>,
    keys: BTreeMap<String, String>,
}

pub fn parse(tokens: &[String]) -> Result<Parsed, Failure> {
    let (kind, rest) = tokens.split_first().ok_or_else(|| Failure::Usage("empty q-expansion description".into()))?;
    let mut label = None;
    let mut keys = BTreeMap::new();
    for t in rest {
        match t.split_once('=') {
            Some((k, v)) => {
                if keys.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(Failure::Usage(format!("{k} given twice")));
                }
            }
            None if kind == "form" && label.is_none() => label = Some(t.clone()),
            None => return Err(Failure::Usage(format!("expected key=value, got {t:?}"))),
        }
    }
    Ok(Parsed { kind: kind.clone(), label, keys })
}

impl Parsed {
    fn take(&mut self, key: &str) -> Option<String> {
        self.keys.remove(key)
    }

    fn int(&mut self, key: &str) -> Result<Option<i64>, Failure> {
        self.take(key)
            .map(|v| v.parse().map_err(|_| Failure::Usage(format!("{key}={v} is not an integer"))))
            .transpose()
    }

    fn need_int(&mut self, key: &str) -> Result<i64, Failure> {
        self.int(key)?.ok_or_else(|| Failure::Usage(format!("{} needs {key}=", self.kind)))
    }

    fn level(&mut self) -> Result<u64, Failure> {
        let n = self.int("N")?.unwrap_or(1);
        u64::try_from(n).ok().filter(|&n| n > 0).ok_or_else(|| Failure::Usage(format!("N={n} must be positive")))
    }

    fn character(&mut self, key: &str) -> Result<Option<DirichletCharacter>, Failure> {
        self.take(key).map(|v| parse_character(&v)).transpose()
    }

    fn finish(&self) -> Result<(), Failure> {
        match self.keys.keys().next() {
            Some(k) => Err(Failure::Usage(format!("unknown key {k:?} for {}", self.kind))),
            None => Ok(()),
        }
    }
}

/// The prime of a `p`-power conductor character, or `None` for the trivial one.
fn prime_of(chi: &DirichletCharacter) -> Result<Option<u64>, Failure> {
    let c = chi.conductor();
    if c == 1 {
        return Ok(None);
    }
    match rankin_core::arith::prime_power(c) {
        Some((p, _)) => Ok(Some(p)),
        None => Err(Failure::Usage(format!("{chi} does not have prime-power conductor"))),
    }
}

fn pick_prime(given: Option<i64>, chars: &[&Option<DirichletCharacter>]) -> Result<u64, Failure> {
    let mut p = given.map(|p| p as u64);
    for chi in chars.iter().filter_map(|c| c.as_ref()) {
        if let Some(q) = prime_of(chi)? {
            if p.is_some_and(|p| p != q) {
                return Err(Failure::Usage(format!("{chi} is not a character of {}-power conductor", p.unwrap())));
            }
            p = Some(q);
        }
    }
    p.ok_or_else(|| Failure::Usage("give p=<prime>".into()))
}

fn loc_alg(n: i64, chi: &Option<DirichletCharacter>, p: u64) -> Result<LocAlgChar, Failure> {
    match chi {
        None => Ok(LocAlgChar::integer(n, p)),
        Some(chi) => Ok(LocAlgChar::new(n, chi.primitive_part(), p)?),
    }
}

/// Builds the expansion to `prec` coefficients.
pub fn build(mut desc: Parsed, prec: usize, db: &FormDatabase) -> Result<QExpansion<QuadNumber>, Failure> {
    let theta = desc.int("theta")?;
    let theta_chi = desc.character("theta_chi")?;
    let (series, p) = match desc.kind.as_str() {
        "eisE" | "eisF" => {
            let k = desc.need_int("k")?;
            let chi = desc.character("chi")?;
            let given = desc.int("p")?;
            let p = pick_prime(given, &[&chi, &theta_chi])?;
            let level = desc.level()?;
            let kappa = loc_alg(k, &chi, p)?;
            let f = if desc.kind == "eisE" { eis_e(&kappa, level, p, prec)? } else { eis_f(&kappa, level, p, prec)? };
            (f, p)
        }
        "scriptE" => {
            let k1 = desc.need_int("k1")?;
            let k2 = desc.need_int("k2")?;
            let j = desc.need_int("j")?;
            let (chi, chi1, chi2) = (desc.character("chi")?, desc.character("chi1")?, desc.character("chi2")?);
            let given = desc.int("p")?;
            let p = pick_prime(given, &[&chi, &chi1, &chi2, &theta_chi])?;
            let level = desc.level()?;
            let f = eis_script(&loc_alg(k1, &chi1, p)?, &loc_alg(k2, &chi2, p)?, &loc_alg(j, &chi, p)?, level, prec)?;
            (f, p)
        }
        "tildeE" => {
            let k1 = desc.need_int("k1")?;
            let k2 = desc.need_int("k2")?;
            let j = desc.need_int("j")?;
            let chi = desc.character("chi")?.ok_or_else(|| Failure::Usage("tildeE needs chi=".into()))?;
            let p = pick_prime(None, &[&Some(chi.clone()), &theta_chi])?;
            let level = desc.level()?;
            (eis_tilde(k1, k2, j, &chi.primitive_part(), level, prec)?, p)
        }
        "form" => {
            let label = desc.label.clone().ok_or_else(|| Failure::Usage("form needs a label".into()))?;
            let given = desc.int("p")?.map(|p| p as u64);
            let stab = desc.take("stab");
            desc.finish()?;
            let f = db.get(&label, given, prec as u64 + 1)?;
            let f = match stab {
                Some(choice) => stabilise(f, &choice)?,
                None => f,
            };
            let p = f.p();
            let e = f.expand(prec)?;
            return twist(e, theta, &theta_chi, p);
        }
        other => return Err(Failure::Usage(format!("unknown q-expansion kind {other:?} (eisE, eisF, scriptE, tildeE, form)"))),
    };
    desc.finish()?;
    twist(series.to_quad(), theta, &theta_chi, p)
}

fn twist(
    f: QExpansion<QuadNumber>,
    theta: Option<i64>,
    theta_chi: &Option<DirichletCharacter>,
    p: u64,
) -> Result<QExpansion<QuadNumber>, Failure> {
    match (theta, theta_chi) {
        (None, None) => Ok(f),
        (t, chi) => Ok(f.theta_twist(&loc_alg(t.unwrap_or(0), chi, p)?)?),
    }
}
