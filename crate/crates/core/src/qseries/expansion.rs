use std::fmt;

use serde_json::Value;

use crate::characters::LocAlgChar;
use crate::cyclo::{CycloNumber, QuadNumber};
use crate::error::{Error, Result};

/// Exact coefficient rings a q-expansion can live over.
pub trait Coefficient: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Result<Self>;
    fn minus(&self, other: &Self) -> Result<Self>;
    fn times(&self, other: &Self) -> Result<Self>;
    fn negated(&self) -> Self;
    fn from_cyclo(c: &CycloNumber) -> Self;
    fn to_json(&self) -> Value;
}

impl Coefficient for CycloNumber {
    fn zero() -> Self {
        CycloNumber::zero()
    }
    fn one() -> Self {
        CycloNumber::one()
    }
    fn is_zero(&self) -> bool {
        CycloNumber::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn minus(&self, other: &Self) -> Result<Self> {
        self.try_sub(other)
    }
    fn times(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_cyclo(c: &CycloNumber) -> Self {
        c.clone()
    }
    fn to_json(&self) -> Value {
        CycloNumber::to_json(self)
    }
}

impl Coefficient for QuadNumber {
    fn zero() -> Self {
        QuadNumber::zero()
    }
    fn one() -> Self {
        QuadNumber::one()
    }
    fn is_zero(&self) -> bool {
        QuadNumber::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn minus(&self, other: &Self) -> Result<Self> {
        self.try_sub(other)
    }
    fn times(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn from_cyclo(c: &CycloNumber) -> Self {
        QuadNumber::from_cyclo(c.clone())
    }
    fn to_json(&self) -> Value {
        QuadNumber::to_json(self)
    }
}

/// A truncated q-expansion `a_0 + a_1 q + ... + a_{prec-1} q^{prec-1}`.
#[derive(Clone, PartialEq)]
pub struct QExpansion<C = CycloNumber> {
    coeffs: Vec<C>,
    weight: Option<LocAlgChar>,
    level: Option<u64>,
}

fn check_prime(p: u64) -> Result<()> {
    if !crate::arith::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    Ok(())
}

impl<C: Coefficient> QExpansion<C> {
    pub fn new(coeffs: Vec<C>) -> Self {
        QExpansion { coeffs, weight: None, level: None }
    }

    pub fn zero(prec: usize) -> Self {
        QExpansion::new(vec![C::zero(); prec])
    }

    pub fn from_fn(prec: usize, f: impl FnMut(usize) -> C) -> Self {
        QExpansion::new((0..prec).map(f).collect())
    }

    pub fn with_weight(mut self, weight: Option<LocAlgChar>) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_level(mut self, level: Option<u64>) -> Self {
        self.level = level;
        self
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> Option<&C> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn weight(&self) -> Option<&LocAlgChar> {
        self.weight.as_ref()
    }

    pub fn level(&self) -> Option<u64> {
        self.level
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(prec);
        out
    }

    fn zip(&self, other: &Self, f: impl Fn(&C, &C) -> Result<C>) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        let weight = if self.weight == other.weight { self.weight.clone() } else { None };
        let level = if self.level == other.level { self.level } else { None };
        Ok(QExpansion { coeffs, weight, level })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.plus(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.minus(b))
    }

    /// Product truncated to the smaller precision; weights add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let prec = self.prec().min(other.prec());
        let mut coeffs = vec![C::zero(); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(prec - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].plus(&a.times(b)?)?;
                }
            }
        }
        let weight = match (&self.weight, &other.weight) {
            (Some(a), Some(b)) => Some(a.try_add(b)?),
            _ => None,
        };
        let level = match (self.level, other.level) {
            (Some(a), Some(b)) => Some(crate::arith::lcm(a, b)),
            _ => None,
        };
        Ok(QExpansion { coeffs, weight, level })
    }

    pub fn scale(&self, c: &C) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.times(c)).collect::<Result<Vec<_>>>()?;
        Ok(QExpansion { coeffs, weight: self.weight.clone(), level: self.level })
    }

    pub fn neg(&self) -> Self {
        QExpansion {
            coeffs: self.coeffs.iter().map(C::negated).collect(),
            weight: self.weight.clone(),
            level: self.level,
        }
    }

    /// `U_p`: `a_n -> a_{pn}`, precision `floor(prec / p)`.
    pub fn u_p(&self, p: u64) -> Result<Self> {
        check_prime(p)?;
        let p = p as usize;
        if self.prec() < p {
            return Err(Error::PrecisionUnderflow { needed: p, available: self.prec() });
        }
        let prec = self.prec() / p;
        let coeffs = (0..prec).map(|n| self.coeffs[n * p].clone()).collect();
        Ok(QExpansion { coeffs, weight: self.weight.clone(), level: self.level })
    }

    /// `V_p`: `q -> q^p`, precision `p * prec`.
    pub fn v_p(&self, p: u64) -> Result<Self> {
        check_prime(p)?;
        let p = p as usize;
        let mut coeffs = vec![C::zero(); self.prec() * p];
        for (n, a) in self.coeffs.iter().enumerate() {
            coeffs[n * p] = a.clone();
        }
        Ok(QExpansion {
            coeffs,
            weight: self.weight.clone(),
            level: self.level.map(|n| n * p as u64),
        })
    }

    /// Kills every `a_n` with `p | n`, including `a_0`.
    pub fn deplete(&self, p: u64) -> Self {
        let p = p as usize;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| if n % p == 0 { C::zero() } else { a.clone() })
            .collect();
        QExpansion { coeffs, weight: self.weight.clone(), level: self.level }
    }

    /// `theta^tau`: `a_n -> tau(n) a_n` for `p` not dividing `n`, zero otherwise.
    /// The weight-character moves by `2 tau`.
    pub fn theta_twist(&self, tau: &LocAlgChar) -> Result<Self> {
        let p = tau.p() as usize;
        let mut coeffs = Vec::with_capacity(self.prec());
        for (n, a) in self.coeffs.iter().enumerate() {
            if n % p == 0 || a.is_zero() {
                coeffs.push(C::zero());
            } else {
                coeffs.push(a.times(&C::from_cyclo(&tau.eval(n as i64)?))?);
            }
        }
        let weight = match &self.weight {
            Some(w) => Some(w.try_add(&tau.times(2))?),
            None => None,
        };
        Ok(QExpansion { coeffs, weight, level: self.level })
    }

    /// Index of the first coefficient where the two series differ, comparing
    /// up to the smaller precision.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .position(|(a, b)| a != b)
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> QExpansion<D> {
        QExpansion {
            coeffs: self.coeffs.iter().map(f).collect(),
            weight: self.weight.clone(),
            level: self.level,
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(Coefficient::to_json).collect())
    }
}

impl QExpansion<CycloNumber> {
    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("q-expansion must be a JSON array".into()))?;
        let coeffs = arr.iter().map(CycloNumber::from_json).collect::<Result<Vec<_>>>()?;
        Ok(QExpansion::new(coeffs))
    }

    pub fn to_quad(&self) -> QExpansion<QuadNumber> {
        self.map(|c| QuadNumber::from_cyclo(c.clone()))
    }
}

impl QExpansion<QuadNumber> {
    /// The series over a cyclotomic field, when every coefficient lies in one.
    pub fn to_cyclo(&self) -> Option<QExpansion<CycloNumber>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.as_cyclo().cloned())
            .collect::<Option<Vec<_>>>()?;
        Some(QExpansion { coeffs, weight: self.weight.clone(), level: self.level })
    }
}

impl<C: Coefficient> fmt::Debug for QExpansion<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coefficient> fmt::Display for QExpansion<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})*q")?,
                _ => write!(f, "({a})*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.prec())
    }
}
