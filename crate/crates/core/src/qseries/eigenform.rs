use std::collections::BTreeMap;

use serde_json::Value;

use super::{Coefficient, QExpansion};
use crate::arith::{gcd, is_prime, prime_power, primes_below, rational_pow, smallest_prime_factors};
use crate::characters::{character_from_json, DirichletCharacter, LocAlgChar};
use crate::cyclo::{hecke_roots, ComplexAP, CycloNumber, QuadNumber};
use crate::error::{Error, Result};

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidForm { field: field.to_string(), reason: reason.into() }
}

/// Which root of the Hecke polynomial at `p` to stabilise at. `Plus` is
/// `a_p/2 + sqrt(a_p^2 - 4 p^(k-1) eps(p))/2` with the principal square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    Plus,
    Minus,
}

/// Coefficient data of a normalised eigenform relative to a prime `p`.
///
/// A crystalline form is either the level-`N_f` newform `f°` itself
/// (`alpha == None`) or one of its two `p`-stabilisations, in which case
/// `ap[p]` still holds `a_p(f°)`. A non-crystalline form is new at `p` and
/// `ap[p]` is its `U_p`-eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenform {
    label: String,
    weight: i64,
    level: u64,
    p: u64,
    eps_n: DirichletCharacter,
    eps_p: DirichletCharacter,
    ap: BTreeMap<u64, CycloNumber>,
    alpha: Option<QuadNumber>,
    beta: Option<QuadNumber>,
    crystalline: bool,
    petersson_norm: Option<String>,
}

impl Eigenform {
    /// A newform of level `N_f` prime to `p`, not yet stabilised.
    pub fn newform(
        label: impl Into<String>,
        weight: i64,
        level: u64,
        p: u64,
        eps_n: DirichletCharacter,
        ap: BTreeMap<u64, CycloNumber>,
    ) -> Result<Self> {
        let f = Eigenform {
            label: label.into(),
            weight,
            level,
            p,
            eps_n,
            eps_p: DirichletCharacter::trivial(1),
            ap,
            alpha: None,
            beta: None,
            crystalline: true,
            petersson_norm: None,
        };
        f.validated()
    }

    /// A form new at `p` with `p`-part of nebentypus `eps_p`; `ap[p]` is its
    /// `U_p`-eigenvalue.
    pub fn p_new(
        label: impl Into<String>,
        weight: i64,
        level: u64,
        p: u64,
        eps_n: DirichletCharacter,
        eps_p: DirichletCharacter,
        ap: BTreeMap<u64, CycloNumber>,
    ) -> Result<Self> {
        let f = Eigenform {
            label: label.into(),
            weight,
            level,
            p,
            eps_n,
            eps_p,
            ap,
            alpha: None,
            beta: None,
            crystalline: false,
            petersson_norm: None,
        };
        f.validated()
    }

    pub fn with_petersson_norm(mut self, norm: Option<String>) -> Result<Self> {
        if let Some(s) = &norm {
            ComplexAP::parse_real(s, 20).map_err(|e| invalid("petersson_norm", e.to_string()))?;
        }
        self.petersson_norm = norm;
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn validated(mut self) -> Result<Self> {
        if self.weight < 1 {
            return Err(invalid("k", "weight must be at least 1"));
        }
        if self.level == 0 {
            return Err(invalid("N_f", "level must be positive"));
        }
        if !is_prime(self.p) {
            return Err(invalid("p", format!("{} is not prime", self.p)));
        }
        if gcd(self.level, self.p) != 1 {
            return Err(invalid("N_f", format!("tame level {} is divisible by p = {}", self.level, self.p)));
        }
        if self.level % self.eps_n.modulus() != 0 {
            return Err(invalid("eps_N", format!("modulus {} does not divide {}", self.eps_n.modulus(), self.level)));
        }
        self.eps_n = self.eps_n.lift(self.level)?;
        let pm = self.eps_p.modulus();
        if pm != 1 && prime_power(pm).map(|(q, _)| q) != Some(self.p) {
            return Err(invalid("eps_p", format!("modulus {pm} is not a power of {}", self.p)));
        }
        if self.crystalline && !self.eps_p.is_trivial() {
            return Err(invalid("crystalline", "a crystalline form has trivial eps_p"));
        }
        let parity = self.eps_n.parity_sign() * self.eps_p.parity_sign();
        let expected = if self.weight % 2 == 0 { 1 } else { -1 };
        if parity != expected {
            return Err(invalid("eps_N", "nebentypus parity does not match (-1)^k"));
        }
        for &l in self.ap.keys() {
            if !is_prime(l) {
                return Err(invalid("ap", format!("key {l} is not prime")));
            }
        }
        if !self.crystalline {
            let ap = self.ap.get(&self.p).cloned();
            match (&self.alpha, ap) {
                (None, Some(a)) => self.alpha = Some(QuadNumber::from_cyclo(a)),
                (Some(al), None) => match al.as_cyclo() {
                    Some(c) => {
                        self.ap.insert(self.p, c.clone());
                    }
                    None => return Err(invalid("alpha", "U_p-eigenvalue of a p-new form must be cyclotomic")),
                },
                (Some(al), Some(a)) if al.as_cyclo() != Some(&a) => {
                    return Err(invalid("alpha", "differs from ap[p] for a non-crystalline form"));
                }
                (None, None) => return Err(invalid("ap", format!("missing U_p-eigenvalue ap[{}]", self.p))),
                _ => {}
            }
            let alpha = self.alpha.clone().expect("set above");
            if alpha.is_zero() {
                self.beta = None;
            } else {
                let c = QuadNumber::from_cyclo(self.hecke_constant());
                self.beta = Some(c.try_div(&alpha)?);
            }
        } else if let Some(alpha) = self.alpha.clone() {
            let ap = self
                .ap
                .get(&self.p)
                .ok_or_else(|| invalid("ap", format!("stabilised form needs a_{}(f°)", self.p)))?;
            let ap = QuadNumber::from_cyclo(ap.clone());
            let c = QuadNumber::from_cyclo(self.hecke_constant());
            let beta = ap.try_sub(&alpha).map_err(|e| invalid("alpha", e.to_string()))?;
            if let Some(given) = &self.beta {
                if *given != beta {
                    return Err(invalid("beta", "alpha + beta != a_p"));
                }
            }
            let prod = alpha.try_mul(&beta).map_err(|e| invalid("alpha", e.to_string()))?;
            if prod != c {
                return Err(Error::NotAHeckeRoot(alpha.to_string()));
            }
            self.beta = Some(beta);
        }
        Ok(self)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn eps_n(&self) -> &DirichletCharacter {
        &self.eps_n
    }

    pub fn eps_p(&self) -> &DirichletCharacter {
        &self.eps_p
    }

    pub fn is_crystalline(&self) -> bool {
        self.crystalline
    }

    /// True for a `p`-stabilised crystalline form (`U_p`-eigenvalue chosen).
    pub fn is_stabilised(&self) -> bool {
        self.crystalline && self.alpha.is_some()
    }

    pub fn alpha(&self) -> Option<&QuadNumber> {
        self.alpha.as_ref()
    }

    pub fn beta(&self) -> Option<&QuadNumber> {
        self.beta.as_ref()
    }

    pub fn eigenvalues(&self) -> &BTreeMap<u64, CycloNumber> {
        &self.ap
    }

    pub fn a(&self, l: u64) -> Option<&CycloNumber> {
        self.ap.get(&l)
    }

    pub fn petersson_norm_string(&self) -> Option<&str> {
        self.petersson_norm.as_deref()
    }

    pub fn petersson_norm(&self, digits: u32) -> Option<ComplexAP> {
        self.petersson_norm
            .as_deref()
            .map(|s| ComplexAP::parse_real(s, digits).expect("validated on construction"))
    }

    /// `kappa = k + eps_p`.
    pub fn weight_character(&self) -> LocAlgChar {
        LocAlgChar::new(self.weight, self.eps_p.clone(), self.p).expect("eps_p has p-power modulus")
    }

    /// `eps(l) = eps_N(l) eps_p(l)`.
    pub fn nebentypus_value(&self, l: i64) -> CycloNumber {
        &self.eps_n.value(l) * &self.eps_p.value(l)
    }

    /// The full nebentypus modulo `N_f` times the modulus of `eps_p`.
    pub fn nebentypus(&self) -> DirichletCharacter {
        self.eps_n.mul(&self.eps_p)
    }

    /// `l^(k-1) eps(l)`, the constant term of the Hecke polynomial at `l`.
    pub fn hecke_constant_at(&self, l: u64) -> CycloNumber {
        let pw = CycloNumber::from_rational(rational_pow(l as i64, self.weight - 1));
        &pw * &self.nebentypus_value(l as i64)
    }

    /// `p^(k-1) eps_N(p)`.
    pub fn hecke_constant(&self) -> CycloNumber {
        let pw = CycloNumber::from_rational(rational_pow(self.p as i64, self.weight - 1));
        &pw * &self.eps_n.value(self.p as i64)
    }

    /// Roots `(alpha, beta)` of `X^2 - a_p X + p^(k-1) eps_N(p)` for the
    /// crystalline newform, `alpha` the `Plus` choice.
    pub fn hecke_roots(&self) -> Result<(QuadNumber, QuadNumber)> {
        if !self.crystalline {
            return Err(Error::Precondition("Hecke roots at p need a crystalline form".into()));
        }
        let ap = self.ap.get(&self.p).ok_or_else(|| Error::MissingEigenvalues(vec![self.p]))?;
        Ok(hecke_roots(ap, &self.hecke_constant()))
    }

    /// The level-`N_f` newform underlying a crystalline form.
    pub fn newform_part(&self) -> Result<Eigenform> {
        if !self.crystalline {
            return Err(Error::Precondition("a p-new form has no level-prime-to-p newform".into()));
        }
        let mut f = self.clone();
        f.alpha = None;
        f.beta = None;
        Ok(f)
    }

    /// `p`-stabilisation with `U_p`-eigenvalue `alpha`. With `strict`, equal
    /// roots are rejected.
    pub fn stabilise(&self, alpha: QuadNumber, strict: bool) -> Result<Eigenform> {
        let mut f = self.newform_part()?;
        if !self.ap.contains_key(&self.p) {
            return Err(Error::MissingEigenvalues(vec![self.p]));
        }
        f.alpha = Some(alpha);
        f.beta = None;
        let f = f.validated()?;
        if strict && f.alpha == f.beta {
            return Err(Error::RepeatedRoot);
        }
        Ok(f)
    }

    pub fn stabilise_at(&self, choice: RootChoice, strict: bool) -> Result<Eigenform> {
        let (a, b) = self.hecke_roots()?;
        let alpha = match choice {
            RootChoice::Plus => a,
            RootChoice::Minus => b,
        };
        self.stabilise(alpha, strict)
    }

    /// `f^c`: nebentypus `eps_N^-1`, `a_l(f^c) = eps_N(l)^-1 a_l(f)` for `l`
    /// prime to `N_f` (including `l = p`, so `alpha^c = eps_N(p)^-1 alpha`),
    /// eigenvalues at `l | N_f` unchanged.
    pub fn conjugate(&self) -> Eigenform {
        let inv = self.eps_n.inv();
        let twist = |l: u64| inv.value(l as i64);
        let ap = self
            .ap
            .iter()
            .map(|(&l, a)| {
                let v = if self.level % l == 0 { a.clone() } else { a * &twist(l) };
                (l, v)
            })
            .collect();
        let tp = QuadNumber::from_cyclo(twist(self.p));
        let scale = |x: &Option<QuadNumber>| x.as_ref().map(|v| v.try_mul(&tp).expect("cyclotomic scalar"));
        Eigenform {
            label: self.label.clone(),
            weight: self.weight,
            level: self.level,
            p: self.p,
            eps_n: inv,
            eps_p: self.eps_p.clone(),
            ap,
            alpha: scale(&self.alpha),
            beta: scale(&self.beta),
            crystalline: self.crystalline,
            petersson_norm: self.petersson_norm.clone(),
        }
    }

    /// Primes below `bound` whose eigenvalue the expansion needs but lacks.
    pub fn missing_primes(&self, bound: u64, stabilised: bool) -> Vec<u64> {
        primes_below(bound)
            .into_iter()
            .filter(|&l| !(l == self.p && stabilised && self.alpha.is_some()))
            .filter(|l| !self.ap.contains_key(l))
            .collect()
    }

    fn prime_power_coeffs<C: Coefficient>(&self, l: u64, count: usize, p_power: Option<&C>) -> Result<Vec<C>> {
        // a_{l^0}, ..., a_{l^(count-1)}
        let mut out = vec![C::one()];
        if count <= 1 {
            return Ok(out);
        }
        let bad = self.level % l == 0 || (l == self.p && !self.crystalline);
        let al = if let (true, Some(a)) = (l == self.p, p_power) {
            for _ in 1..count {
                let next = out.last().expect("nonempty").times(a)?;
                out.push(next);
            }
            return Ok(out);
        } else {
            C::from_cyclo(self.ap.get(&l).ok_or_else(|| Error::MissingEigenvalues(vec![l]))?)
        };
        if bad {
            for _ in 1..count {
                let next = out.last().expect("nonempty").times(&al)?;
                out.push(next);
            }
            return Ok(out);
        }
        let c = C::from_cyclo(&self.hecke_constant_at(l));
        out.push(al.clone());
        while out.len() < count {
            let r = out.len();
            let next = al.times(&out[r - 1])?.minus(&c.times(&out[r - 2])?)?;
            out.push(next);
        }
        Ok(out)
    }

    fn coefficients<C: Coefficient>(&self, prec: usize, p_power: Option<&C>, stabilised: bool) -> Result<Vec<C>> {
        let missing = self.missing_primes(prec as u64, stabilised);
        if !missing.is_empty() {
            return Err(Error::MissingEigenvalues(missing));
        }
        let mut a = vec![C::zero(); prec];
        if prec <= 1 {
            return Ok(a);
        }
        a[1] = C::one();
        let spf = smallest_prime_factors(prec);
        let mut tables: BTreeMap<u64, Vec<C>> = BTreeMap::new();
        for n in 2..prec {
            let l = spf[n] as usize;
            let mut m = n;
            let mut r = 0;
            while m % l == 0 {
                m /= l;
                r += 1;
            }
            if !tables.contains_key(&(l as u64)) {
                let mut count = 1;
                let mut pw = 1usize;
                while pw < prec {
                    pw = pw.saturating_mul(l);
                    count += 1;
                }
                let t = self.prime_power_coeffs(l as u64, count, p_power)?;
                tables.insert(l as u64, t);
            }
            let lr = &tables[&(l as u64)][r];
            a[n] = if m == 1 { lr.clone() } else { lr.times(&a[m])? };
        }
        Ok(a)
    }

    /// q-expansion of this form (the stabilisation when `alpha` is set).
    pub fn expand(&self, prec: usize) -> Result<QExpansion<QuadNumber>> {
        let stabilised = self.is_stabilised();
        let alpha = if stabilised { self.alpha.as_ref() } else { None };
        let coeffs = self.coefficients(prec, alpha, stabilised)?;
        Ok(QExpansion::new(coeffs)
            .with_weight(Some(self.weight_character()))
            .with_level(Some(self.level)))
    }

    /// q-expansion of this form when all its coefficients are cyclotomic.
    pub fn expand_cyclo(&self, prec: usize) -> Result<QExpansion<CycloNumber>> {
        if self.is_stabilised() {
            if let Some(a) = self.alpha.as_ref().and_then(QuadNumber::as_cyclo) {
                let coeffs = self.coefficients(prec, Some(a), true)?;
                return Ok(QExpansion::new(coeffs)
                    .with_weight(Some(self.weight_character()))
                    .with_level(Some(self.level)));
            }
            return Err(Error::Precondition(format!(
                "U_p-eigenvalue of {} is not cyclotomic",
                self.label
            )));
        }
        self.expand_newform(prec)
    }

    /// q-expansion of `f°` for crystalline forms, of the form itself otherwise.
    pub fn expand_newform(&self, prec: usize) -> Result<QExpansion<CycloNumber>> {
        let coeffs = self.coefficients::<CycloNumber>(prec, None, false)?;
        Ok(QExpansion::new(coeffs)
            .with_weight(Some(self.weight_character()))
            .with_level(Some(self.level)))
    }

    /// Eigenform JSON record.
    pub fn to_json(&self) -> Value {
        let ap: serde_json::Map<String, Value> =
            self.ap.iter().map(|(l, a)| (l.to_string(), a.to_json())).collect();
        let mut obj = serde_json::Map::new();
        obj.insert("label".into(), Value::from(self.label.clone()));
        obj.insert("k".into(), Value::from(self.weight));
        obj.insert("N_f".into(), Value::from(self.level));
        obj.insert("p".into(), Value::from(self.p));
        obj.insert("eps_N".into(), self.eps_n.to_json());
        obj.insert("eps_p".into(), self.eps_p.to_json());
        obj.insert("ap".into(), Value::Object(ap));
        let quad = |x: &Option<QuadNumber>| x.as_ref().map_or(Value::Null, QuadNumber::to_json);
        obj.insert("alpha".into(), if self.is_stabilised() || !self.crystalline { quad(&self.alpha) } else { Value::Null });
        obj.insert("beta".into(), if self.is_stabilised() || !self.crystalline { quad(&self.beta) } else { Value::Null });
        obj.insert("crystalline".into(), Value::from(self.crystalline));
        obj.insert(
            "petersson_norm".into(),
            self.petersson_norm.clone().map_or(Value::Null, Value::from),
        );
        Value::Object(obj)
    }

    /// Parses and validates an eigenform record. `alpha` may be a number, a
    /// radical object, or `"+"`/`"-"` to pick a root of the Hecke polynomial.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| invalid("<record>", "expected a JSON object"))?;
        let label = obj.get("label").and_then(Value::as_str).unwrap_or("").to_string();
        let weight = obj.get("k").and_then(Value::as_i64).ok_or_else(|| invalid("k", "missing integer weight"))?;
        let level = obj.get("N_f").and_then(Value::as_u64).ok_or_else(|| invalid("N_f", "missing positive level"))?;
        let p = obj.get("p").and_then(Value::as_u64).ok_or_else(|| invalid("p", "missing prime"))?;
        let eps_n = character_from_json(obj.get("eps_N").unwrap_or(&Value::Null), level)
            .map_err(|e| invalid("eps_N", e.to_string()))?;
        let eps_p = character_from_json(obj.get("eps_p").unwrap_or(&Value::Null), 1)
            .map_err(|e| invalid("eps_p", e.to_string()))?;
        let mut ap = BTreeMap::new();
        if let Some(raw) = obj.get("ap") {
            let raw = raw.as_object().ok_or_else(|| invalid("ap", "expected an object keyed by primes"))?;
            for (key, val) in raw {
                let l: u64 = key.trim().parse().map_err(|_| invalid("ap", format!("key {key:?} is not an integer")))?;
                let a = CycloNumber::from_json(val).map_err(|e| invalid("ap", format!("a_{l}: {e}")))?;
                ap.insert(l, a);
            }
        }
        if ap.get(&1).is_some_and(|a| !a.is_one()) {
            return Err(invalid("ap", "a_1 must be 1"));
        }
        ap.remove(&1);
        let crystalline = match obj.get("crystalline") {
            None | Some(Value::Null) => eps_p.is_trivial(),
            Some(Value::Bool(b)) => *b,
            Some(_) => return Err(invalid("crystalline", "expected a boolean")),
        };
        let norm = match obj.get("petersson_norm") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(Value::Number(n)) => Some(n.to_string()),
            Some(_) => return Err(invalid("petersson_norm", "expected a decimal string or null")),
        };
        let base = if crystalline {
            Eigenform::newform(label, weight, level, p, eps_n, ap)?
        } else {
            let mut f = Eigenform {
                label,
                weight,
                level,
                p,
                eps_n,
                eps_p,
                ap,
                alpha: None,
                beta: None,
                crystalline: false,
                petersson_norm: None,
            };
            if let Some(a) = obj.get("alpha").filter(|a| !a.is_null()) {
                f.alpha = Some(QuadNumber::from_json(a).map_err(|e| invalid("alpha", e.to_string()))?);
            }
            f.validated()?
        };
        let base = base.with_petersson_norm(norm)?;
        if !crystalline {
            return Ok(base);
        }
        let alpha = match obj.get("alpha") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) if s == "+" || s == "-" => {
                let (a, b) = base.hecke_roots()?;
                Some(if s == "+" { a } else { b })
            }
            Some(a) => Some(QuadNumber::from_json(a).map_err(|e| invalid("alpha", e.to_string()))?),
        };
        let beta = match obj.get("beta") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) if s == "+" || s == "-" => {
                let (a, b) = base.hecke_roots()?;
                Some(if s == "+" { a } else { b })
            }
            Some(b) => Some(QuadNumber::from_json(b).map_err(|e| invalid("beta", e.to_string()))?),
        };
        match (alpha, beta) {
            (None, None) => Ok(base),
            (Some(a), b) => {
                let mut f = base.stabilise(a, false)?;
                if let Some(b) = b {
                    if Some(&b) != f.beta() {
                        return Err(invalid("beta", "alpha + beta != a_p"));
                    }
                    f.beta = Some(b);
                }
                Ok(f)
            }
            (None, Some(b)) => {
                let ap = QuadNumber::from_cyclo(base.ap[&p].clone());
                base.stabilise(ap.try_sub(&b)?, false)
            }
        }
    }
}

/// `f° - beta V_p f°` truncated to the precision of `f°`. With `beta = 0` this
/// is `f°` itself.
pub fn stabilised_expansion(newform: &QExpansion<QuadNumber>, beta: &QuadNumber, p: u64) -> Result<QExpansion<QuadNumber>> {
    let shifted = newform.v_p(p)?.truncate(newform.prec()).scale(beta)?;
    let out = newform.sub(&shifted)?;
    Ok(out.with_weight(newform.weight().cloned()).with_level(newform.level()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f11(p: u64) -> Eigenform {
        let ap: BTreeMap<u64, CycloNumber> =
            [(2, -2), (3, -1), (5, 1), (7, -2), (11, 1), (13, 4), (17, -2), (19, 0), (23, -1), (29, 0), (31, 7), (37, 3), (41, -8), (43, -6), (47, 8), (53, -6), (59, 5), (61, 12)]
                .into_iter()
                .map(|(l, a)| (l, CycloNumber::from_integer(a)))
                .collect();
        Eigenform::newform("11.2.a.a", 2, 11, p, DirichletCharacter::trivial(11), ap).unwrap()
    }

    #[test]
    fn newform_expansion_and_multiplicativity() {
        let f = f11(3).expand_newform(62).unwrap();
        // q - 2q^2 - q^3 + 2q^4 + q^5 + 2q^6 - 2q^7 - 2q^9 - 2q^10 + q^11
        let first: Vec<i64> = vec![0, 1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1];
        for (n, &c) in first.iter().enumerate() {
            assert_eq!(f.coeff(n).unwrap(), &CycloNumber::from_integer(c), "a_{n}");
        }
        for m in 1..62usize {
            for n in 1..62usize {
                if m * n < 62 && gcd(m as u64, n as u64) == 1 {
                    assert_eq!(f.coeff(m * n).unwrap(), &(f.coeff(m).unwrap() * f.coeff(n).unwrap()));
                }
            }
        }
    }

    #[test]
    fn stabilisations_are_up_eigenforms() {
        let f = f11(3);
        for choice in [RootChoice::Plus, RootChoice::Minus] {
            let g = f.stabilise_at(choice, true).unwrap();
            let e = g.expand(60).unwrap();
            let u = e.u_p(3).unwrap();
            let scaled = e.truncate(20).scale(g.alpha().unwrap()).unwrap();
            assert_eq!(u.coeffs(), scaled.coeffs());
            // matches f° - beta V_p f°
            let alt = stabilised_expansion(&f.expand_newform(60).unwrap().to_quad(), g.beta().unwrap(), 3).unwrap();
            assert_eq!(alt.coeffs(), e.coeffs());
        }
    }

    #[test]
    fn rejects_non_roots_and_missing_data() {
        let f = f11(3);
        let bad = f.stabilise(QuadNumber::from_cyclo(CycloNumber::from_integer(2)), false);
        assert!(matches!(bad, Err(Error::NotAHeckeRoot(_))));
        let e = f.expand_newform(100);
        assert!(matches!(e, Err(Error::MissingEigenvalues(ref v)) if v.contains(&67)));
    }

    #[test]
    fn conjugation_of_trivial_character_is_identity() {
        let f = f11(5).stabilise_at(RootChoice::Plus, false).unwrap();
        assert_eq!(f.conjugate(), f);
        assert_eq!(f.conjugate().conjugate(), f);
    }

    #[test]
    fn json_round_trip() {
        let f = f11(3).stabilise_at(RootChoice::Minus, false).unwrap();
        let back = Eigenform::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let mut v = f.to_json();
        v["alpha"] = Value::from("-");
        v["beta"] = Value::Null;
        assert_eq!(Eigenform::from_json(&v).unwrap(), f);
        v["k"] = Value::from(3);
        assert!(matches!(Eigenform::from_json(&v), Err(Error::InvalidForm { .. })));
    }
}
