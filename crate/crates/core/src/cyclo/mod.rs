//! Exact arithmetic in cyclotomic fields `Q(zeta_M)`.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(M)-1)` with
//! `z = exp(2 pi i / M)` and reduced modulo the `M`-th cyclotomic polynomial,
//! so equal elements of the same field have identical coefficient vectors.
//! Binary operations lift both operands into `Q(zeta_lcm)`.

mod complex;
mod poly;
mod quad;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::arith::{euler_phi, gcd, lcm};
use crate::error::{Error, Result};

pub use complex::{bits_for_digits, ComplexAP};
pub use quad::{hecke_roots, sqrt_of, sqrt_of_integer, QuadNumber};

static MODULUS_LIMIT: AtomicU64 = AtomicU64::new(1_000_000);

/// Largest modulus any operation is allowed to create.
pub fn modulus_limit() -> u64 {
    MODULUS_LIMIT.load(Ordering::Relaxed)
}

/// Changes the process-wide modulus cap (default `10^6`).
pub fn set_modulus_limit(limit: u64) {
    MODULUS_LIMIT.store(limit.max(1), Ordering::Relaxed);
}

fn check_modulus(m: u64) -> Result<()> {
    let limit = modulus_limit();
    if m == 0 || m > limit {
        return Err(Error::ModulusTooLarge { modulus: m, limit });
    }
    Ok(())
}

fn common_modulus(a: u64, b: u64) -> Result<u64> {
    let m = lcm(a, b);
    check_modulus(m)?;
    Ok(m)
}

#[derive(Clone, PartialOrd, Ord)]
pub struct CycloNumber {
    modulus: u64,
    coeffs: Vec<BigRational>,
}

impl CycloNumber {
    pub fn zero() -> Self {
        CycloNumber::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        CycloNumber::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        CycloNumber::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        CycloNumber::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycloNumber { modulus: 1, coeffs: vec![q] }
    }

    /// `p / q` as a field element.
    pub fn fraction(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        CycloNumber::from_rational(BigRational::new(p.into(), q.into()))
    }

    /// The canonical primitive root `zeta_m = exp(2 pi i / m)`.
    pub fn zeta(m: u64) -> Self {
        CycloNumber::zeta_pow(m, 1)
    }

    /// `zeta_m^k`, any integer `k`.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        CycloNumber::from_exponents(m, [(k, BigRational::one())])
    }

    /// `sum c_k zeta_m^k` from (exponent, coefficient) pairs; exponents are
    /// taken mod `m`. Panics if `m` exceeds the modulus limit.
    pub fn from_exponents<I>(m: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        CycloNumber::try_from_exponents(m, terms).expect("cyclotomic modulus")
    }

    pub fn try_from_exponents<I>(m: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        check_modulus(m)?;
        let mut dense = vec![BigRational::zero(); m as usize];
        for (k, c) in terms {
            dense[k.rem_euclid(m as i64) as usize] += c;
        }
        Ok(CycloNumber::from_dense(m, dense))
    }

    /// Builds an element from power-basis coefficients of any length, reducing
    /// modulo `Phi_m`.
    pub fn from_power_basis(m: u64, coeffs: Vec<BigRational>) -> Result<Self> {
        check_modulus(m)?;
        Ok(CycloNumber::from_dense(m, coeffs))
    }

    fn from_dense(m: u64, coeffs: Vec<BigRational>) -> Self {
        let phi = poly::cyclotomic(m);
        let coeffs = poly::reduce_mod(coeffs, &phi);
        CycloNumber { modulus: m, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Power-basis coefficients, length `phi(M)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_one())
    }

    /// `Some(q)` when the element is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Rewrites the element in `Q(zeta_m)` for a multiple `m` of its modulus.
    pub fn lift_to(&self, m: u64) -> Result<Self> {
        if m % self.modulus != 0 {
            return Err(Error::Precondition(format!(
                "cannot lift Q(zeta_{}) into Q(zeta_{m})",
                self.modulus
            )));
        }
        if m == self.modulus {
            return Ok(self.clone());
        }
        check_modulus(m)?;
        let step = (m / self.modulus) as usize;
        let mut dense = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[i * step] = c.clone();
            }
        }
        Ok(CycloNumber::from_dense(m, dense))
    }

    fn lift_unchecked(&self, m: u64) -> Self {
        self.lift_to(m).expect("modulus checked by caller")
    }

    /// Coefficients of the element in `Q(zeta_m)`; `m` must be a multiple of
    /// the current modulus.
    pub fn coefficients_in(&self, m: u64) -> Result<Vec<BigRational>> {
        Ok(self.lift_to(m)?.coeffs)
    }

    /// The element rewritten in `Q(zeta_m)` when it lies in that subfield.
    pub fn project_to(&self, m: u64) -> Option<Self> {
        if self.modulus % m == 0 {
            return self.project_divisor(m);
        }
        let big = lcm(self.modulus, m);
        self.lift_to(big).ok()?.project_divisor(m)
    }

    // Solves lift(b) = self for b in Q(zeta_m), m | modulus, by Gaussian
    // elimination on the images of the basis of Q(zeta_m).
    fn project_divisor(&self, m: u64) -> Option<Self> {
        if m == self.modulus {
            return Some(self.clone());
        }
        let rows = self.coeffs.len();
        let cols = euler_phi(m) as usize;
        let basis: Vec<Vec<BigRational>> = (0..cols)
            .map(|i| CycloNumber::zeta_pow(m, i as i64).lift_unchecked(self.modulus).coeffs)
            .collect();
        // augmented matrix, rows x (cols + 1)
        let mut mat: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> = basis.iter().map(|b| b[r].clone()).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
                continue;
            };
            mat.swap(r, p);
            let inv = mat[r][c].recip();
            for x in mat[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..rows {
                if i != r && !mat[i][c].is_zero() {
                    let f = mat[i][c].clone();
                    let (src, dst) = if i < r {
                        let (a, b) = mat.split_at_mut(r);
                        (&b[0], &mut a[i])
                    } else {
                        let (a, b) = mat.split_at_mut(i);
                        (&a[r], &mut b[0])
                    };
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d -= &f * s;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if mat[r..].iter().any(|row| !row[cols].is_zero()) {
            return None;
        }
        let mut out = vec![BigRational::zero(); cols];
        for (i, &c) in pivots.iter().enumerate() {
            out[c] = mat[i][cols].clone();
        }
        Some(CycloNumber { modulus: m, coeffs: out })
    }

    /// Rewrites the element in the smallest cyclotomic field containing it.
    pub fn simplify(&self) -> Self {
        if self.to_rational().is_some() {
            return CycloNumber::from_rational(self.coeffs[0].clone());
        }
        crate::arith::divisors(self.modulus)
            .into_iter()
            .filter(|&d| d > 1 && d < self.modulus && d % 4 != 2)
            .find_map(|d| self.project_divisor(d))
            .unwrap_or_else(|| self.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Result<Self> {
        let m = common_modulus(self.modulus, other.modulus)?;
        let a = self.lift_to(m)?;
        let b = other.lift_to(m)?;
        let coeffs = a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| f(x, y)).collect();
        Ok(CycloNumber { modulus: m, coeffs })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() && other.modulus == 1 {
            return Ok(self.clone());
        }
        self.zip_with(other, |x, y| x + y)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if let Some(q) = other.to_rational() {
            if other.modulus == 1 || self.modulus % other.modulus == 0 {
                return Ok(self.scale(&q));
            }
        }
        if let Some(q) = self.to_rational() {
            if self.modulus == 1 || other.modulus % self.modulus == 0 {
                return Ok(other.scale(&q));
            }
        }
        let m = common_modulus(self.modulus, other.modulus)?;
        let a = self.lift_to(m)?;
        let b = other.lift_to(m)?;
        let prod = poly::mul_dense(&a.coeffs, &b.coeffs);
        Ok(CycloNumber::from_dense(m, prod))
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> Self {
        CycloNumber {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(CycloNumber::from_rational(q.recip()).lift_unchecked(self.modulus));
        }
        let phi = poly::cyclotomic(self.modulus);
        let inv = poly::inverse_mod(&self.coeffs, &phi).ok_or(Error::DivisionByZero)?;
        Ok(CycloNumber::from_dense(self.modulus, inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.inv()? } else { self.clone() };
        if let Some(q) = base.to_rational() {
            let r = crate::arith::rational_powi(&q, n.abs());
            return Ok(CycloNumber::from_rational(r).lift_unchecked(self.modulus));
        }
        let mut e = n.unsigned_abs();
        let mut acc = CycloNumber::one().lift_unchecked(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// The automorphism `zeta_M -> zeta_M^a`, `gcd(a, M) = 1`.
    pub fn galois(&self, a: i64) -> Result<Self> {
        let m = self.modulus;
        if gcd(a.rem_euclid(m as i64) as u64, m) != 1 {
            return Err(Error::NotCoprime { n: a.unsigned_abs(), p: m });
        }
        let mut dense = vec![BigRational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let k = (a * i as i64).rem_euclid(m as i64) as usize;
                dense[k] += c;
            }
        }
        Ok(CycloNumber::from_dense(m, dense))
    }

    /// Action of `zeta -> zeta^-1`, which is complex conjugation under the
    /// fixed embedding.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    /// Value under `zeta_M -> exp(2 pi i / M)`.
    pub fn embed(&self, digits: u32) -> ComplexAP {
        let mut acc = ComplexAP::from_rational(&self.coeffs[0], digits);
        if self.coeffs.len() == 1 {
            return acc;
        }
        let z = ComplexAP::root_of_unity(1, self.modulus, digits);
        let mut zk = z.clone();
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            if !c.is_zero() {
                acc = acc.add(&zk.mul(&ComplexAP::from_rational(c, digits)));
            }
            if k + 1 < self.coeffs.len() {
                zk = zk.mul(&z);
            }
        }
        acc
    }

    /// Quick double-precision embedding, for diagnostics.
    pub fn embed_f64(&self) -> (f64, f64) {
        let m = self.modulus as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / m;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }

    /// `{"M": m, "coeffs": [[num, den], ...]}` with integers as exact JSON
    /// numbers, written in the smallest field containing the element.
    pub fn to_json(&self) -> Value {
        let small = self.simplify();
        let coeffs = small
            .coeffs
            .iter()
            .map(|c| Value::Array(vec![big_json(c.numer()), big_json(c.denom())]))
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("M".into(), Value::from(small.modulus));
        obj.insert("coeffs".into(), Value::Array(coeffs));
        Value::Object(obj)
    }

    /// Parses the object form, or a bare integer / `"num/den"` string for
    /// rationals.
    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(_) | Value::String(_) => Ok(CycloNumber::from_rational(json_rational(v)?)),
            Value::Object(obj) => {
                let m = obj
                    .get("M")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("cyclotomic value needs a positive integer \"M\"".into()))?;
                check_modulus(m)?;
                let raw = obj
                    .get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("cyclotomic value needs a \"coeffs\" array".into()))?;
                let coeffs = raw.iter().map(json_rational).collect::<Result<Vec<_>>>()?;
                CycloNumber::from_power_basis(m, coeffs)
            }
            _ => Err(Error::Parse(format!("not a cyclotomic value: {v}"))),
        }
    }
}

fn big_json(n: &BigInt) -> Value {
    if let Some(small) = n.to_i64() {
        return Value::from(small);
    }
    let parsed: std::result::Result<serde_json::Number, _> = n.to_string().parse();
    match parsed {
        Ok(num) => Value::Number(num),
        Err(_) => Value::String(n.to_string()),
    }
}

fn json_bigint(v: &Value) -> Result<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(Error::Parse(format!("expected an integer, got {v}"))),
    };
    text.parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("expected an integer, got {text}")))
}

/// Accepts `[num, den]`, an integer, or a `"num/den"` string.
pub(crate) fn json_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let num = json_bigint(&pair[0])?;
            let den = json_bigint(&pair[1])?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(num, den))
        }
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Ok(BigRational::from_integer(json_bigint(v)?)),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.modulus == other.modulus {
            return self.coeffs == other.coeffs;
        }
        match (self.to_rational(), other.to_rational()) {
            (Some(a), Some(b)) => return a == b,
            (Some(_), None) | (None, Some(_)) => return false,
            _ => {}
        }
        let m = lcm(self.modulus, other.modulus);
        match (self.lift_to(m), other.lift_to(m)) {
            (Ok(a), Ok(b)) => a.coeffs == b.coeffs,
            _ => false,
        }
    }
}

impl Eq for CycloNumber {}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = format_rational(&c.abs());
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let power = match k {
                0 => String::new(),
                1 => format!("z{}", self.modulus),
                _ => format!("z{}^{}", self.modulus, k),
            };
            match (k, mag.as_str()) {
                (0, _) => f.write_str(&mag)?,
                (_, "1") => f.write_str(&power)?,
                _ => write!(f, "{mag}*{power}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl serde::Serialize for CycloNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for CycloNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        CycloNumber::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl From<i64> for CycloNumber {
    fn from(n: i64) -> Self {
        CycloNumber::from_integer(n)
    }
}

impl From<BigRational> for CycloNumber {
    fn from(q: BigRational) -> Self {
        CycloNumber::from_rational(q)
    }
}

// Operator forms panic when the result would exceed the modulus limit; use the
// `try_` methods to handle that case.
macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&CycloNumber> for &CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: &CycloNumber) -> CycloNumber {
                self.$try(rhs).expect("cyclotomic modulus limit exceeded")
            }
        }
        impl $tr<CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: &CycloNumber) -> CycloNumber {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl std::iter::Sum for CycloNumber {
    fn sum<I: Iterator<Item = CycloNumber>>(iter: I) -> Self {
        iter.fold(CycloNumber::zero(), |a, b| a + b)
    }
}
