//! Quadratic extensions `K(sqrt D)` of cyclotomic fields.
//!
//! Hecke polynomials `X^2 - a_p X + p^(k-1) eps(p)` usually have roots outside
//! every small cyclotomic field (for Delta at p = 3 they live in `Q(sqrt -1991)`),
//! so U_p-eigenvalues are carried as `a + b sqrt(D)` with `a, b, D` cyclotomic
//! and `sqrt(D)` the principal complex square root of the embedded `D`.
//! Whenever `sqrt(D)` is cheaply cyclotomic it is rewritten as such.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::{ComplexAP, CycloNumber};
use crate::arith::square_part;
use crate::error::{Error, Result};

/// Largest conductor of `Q(sqrt d)` that is rewritten cyclotomically.
const CYCLOTOMIC_SQRT_CONDUCTOR: u64 = 1000;
const TRIAL_BOUND: u64 = 1_000_000;

#[derive(Clone)]
pub struct QuadNumber {
    a: CycloNumber,
    b: CycloNumber,
    // Radicand; meaningless when b = 0, in which case it is stored as 0.
    d: CycloNumber,
}

impl QuadNumber {
    pub fn from_cyclo(a: CycloNumber) -> Self {
        QuadNumber { a, b: CycloNumber::zero(), d: CycloNumber::zero() }
    }

    /// `a + b sqrt(d)`; the radicand is simplified when it is rational.
    pub fn new(a: CycloNumber, b: CycloNumber, d: CycloNumber) -> Self {
        if b.is_zero() || d.is_zero() {
            return QuadNumber::from_cyclo(a);
        }
        let root = sqrt_of(&d);
        root.scale_cyclo(&b).plus_cyclo(&a)
    }

    pub fn zero() -> Self {
        QuadNumber::from_cyclo(CycloNumber::zero())
    }

    pub fn one() -> Self {
        QuadNumber::from_cyclo(CycloNumber::one())
    }

    pub fn rational_part(&self) -> &CycloNumber {
        &self.a
    }

    pub fn radical_coeff(&self) -> &CycloNumber {
        &self.b
    }

    pub fn radicand(&self) -> Option<&CycloNumber> {
        (!self.b.is_zero()).then_some(&self.d)
    }

    /// `Some` when the value lies in a cyclotomic field.
    pub fn as_cyclo(&self) -> Option<&CycloNumber> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn is_cyclotomic(&self) -> bool {
        self.b.is_zero()
    }

    fn plus_cyclo(&self, c: &CycloNumber) -> Self {
        QuadNumber { a: &self.a + c, b: self.b.clone(), d: self.d.clone() }
    }

    fn scale_cyclo(&self, c: &CycloNumber) -> Self {
        if c.is_zero() {
            return QuadNumber::zero();
        }
        QuadNumber { a: &self.a * c, b: &self.b * c, d: self.d.clone() }
    }

    fn radicand_with(&self, other: &Self) -> Result<CycloNumber> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => Ok(CycloNumber::zero()),
            (false, true) => Ok(self.d.clone()),
            (true, false) => Ok(other.d.clone()),
            (false, false) if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::IncompatibleRadicands(format!(
                "sqrt({}) and sqrt({})",
                self.d, other.d
            ))),
        }
    }

    fn normalised(a: CycloNumber, b: CycloNumber, d: CycloNumber) -> Self {
        if b.is_zero() {
            QuadNumber::from_cyclo(a)
        } else {
            QuadNumber { a, b, d }
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let d = self.radicand_with(o)?;
        Ok(QuadNumber::normalised(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        let d = self.radicand_with(o)?;
        Ok(QuadNumber::normalised(&self.a - &o.a, &self.b - &o.b, d))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if o.b.is_zero() {
            return Ok(self.scale_cyclo(&o.a));
        }
        if self.b.is_zero() {
            return Ok(o.scale_cyclo(&self.a));
        }
        let d = self.radicand_with(o)?;
        let a = &(&self.a * &o.a) + &(&(&self.b * &o.b) * &d);
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        Ok(QuadNumber::normalised(a, b, d))
    }

    pub fn neg(&self) -> Self {
        QuadNumber { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }

    /// `a - b sqrt(D)`.
    pub fn galois_conj(&self) -> Self {
        QuadNumber { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    /// `a^2 - b^2 D`.
    pub fn norm(&self) -> CycloNumber {
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &self.d)
    }

    pub fn is_zero(&self) -> bool {
        if self.b.is_zero() {
            return self.a.is_zero();
        }
        if !self.norm().is_zero() {
            return false;
        }
        // a = +-b sqrt(D): the value is 0 or 2a, and a != 0 here.
        let v = self.embed(30);
        v.abs_f64() < 1e-20 * (1.0 + self.a.embed(30).abs_f64())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.b.is_zero() {
            return Ok(QuadNumber::from_cyclo(self.a.inv()?));
        }
        let n = self.norm();
        if n.is_zero() {
            // The radicand is a square in the cyclotomic field: the value is 2a.
            if self.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let two_a = self.a.scale(&BigRational::from_integer(2.into()));
            return Ok(QuadNumber::from_cyclo(two_a.inv()?));
        }
        let ninv = n.inv()?;
        Ok(self.galois_conj().scale_cyclo(&ninv))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.try_mul(&o.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = QuadNumber::one();
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

    pub fn embed(&self, digits: u32) -> ComplexAP {
        let a = self.a.embed(digits);
        if self.b.is_zero() {
            return a;
        }
        a.add(&self.b.embed(digits).mul(&self.d.embed(digits).sqrt()))
    }

    pub fn embed_f64(&self) -> (f64, f64) {
        let v = self.embed(20);
        (v.re_f64(), v.im_f64())
    }

    /// Applies a field automorphism `zeta -> zeta^g` to `a` and `b` (and `D`),
    /// keeping the symbol `sqrt(D)` fixed. Only meaningful for rational `D`.
    pub fn galois_cyclo(&self, g: i64) -> Result<Self> {
        Ok(QuadNumber::normalised(self.a.galois(g)?, self.b.galois(g)?, self.d.clone()))
    }

    /// Plain cyclotomic value, or the radical form.
    pub fn to_json(&self) -> Value {
        if self.b.is_zero() {
            return self.a.to_json();
        }
        let mut obj = serde_json::Map::new();
        obj.insert("a".into(), self.a.to_json());
        obj.insert("b".into(), self.b.to_json());
        obj.insert("D".into(), self.d.to_json());
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if let Value::Object(obj) = v {
            if obj.contains_key("D") {
                let get = |k: &str| {
                    obj.get(k)
                        .map(CycloNumber::from_json)
                        .unwrap_or_else(|| Ok(CycloNumber::zero()))
                };
                return Ok(QuadNumber::new(get("a")?, get("b")?, get("D")?));
            }
        }
        Ok(QuadNumber::from_cyclo(CycloNumber::from_json(v)?))
    }
}

impl PartialEq for QuadNumber {
    fn eq(&self, other: &Self) -> bool {
        match self.try_sub(other) {
            Ok(diff) => diff.is_zero(),
            // Different radicands: equal only if both sides are cyclotomic-free
            // of each other, which cannot happen with non-zero radical parts
            // unless the radicands differ by a square; compare numerically.
            Err(_) => self.embed(40).dist(&other.embed(40)) < 1e-30,
        }
    }
}

impl fmt::Debug for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{} + ", self.a)?;
        }
        write!(f, "({})*sqrt({})", self.b, self.d)
    }
}

impl From<CycloNumber> for QuadNumber {
    fn from(c: CycloNumber) -> Self {
        QuadNumber::from_cyclo(c)
    }
}

/// Principal square root of a cyclotomic number. Rational radicands are
/// reduced to `s * sqrt(d)` with `d` squarefree, and `sqrt(d)` is written
/// cyclotomically when the conductor of `Q(sqrt d)` is small.
pub fn sqrt_of(d: &CycloNumber) -> QuadNumber {
    match d.to_rational() {
        Some(q) => sqrt_of_rational(&q),
        None => QuadNumber {
            a: CycloNumber::zero(),
            b: CycloNumber::one(),
            d: d.clone(),
        },
    }
}

fn sqrt_of_rational(q: &BigRational) -> QuadNumber {
    if q.is_zero() {
        return QuadNumber::zero();
    }
    // sqrt(n/m) = sqrt(n m) / m
    let prod = q.numer() * q.denom();
    let root = sqrt_of_integer(&prod);
    let inv_den = CycloNumber::from_rational(BigRational::new(BigInt::one(), q.denom().clone()));
    root.scale_cyclo(&inv_den)
}

/// Principal square root of a non-zero integer.
pub fn sqrt_of_integer(n: &BigInt) -> QuadNumber {
    if n.is_zero() {
        return QuadNumber::zero();
    }
    let (s, free) = square_part(n, TRIAL_BOUND);
    let s = CycloNumber::from_bigint(s);
    if free.is_one() {
        return QuadNumber::from_cyclo(s);
    }
    let sym = QuadNumber {
        a: CycloNumber::zero(),
        b: s.clone(),
        d: CycloNumber::from_bigint(free.clone()),
    };
    match cyclotomic_sqrt(&free) {
        Some(r) => QuadNumber::from_cyclo(&r * &s),
        None => sym,
    }
}

// sqrt(d) for squarefree d as a cyclotomic number, principal branch, when the
// discriminant of Q(sqrt d) is at most the conductor cap.
fn cyclotomic_sqrt(d: &BigInt) -> Option<CycloNumber> {
    let abs: u64 = num_traits::ToPrimitive::to_u64(&d.abs())?;
    let conductor = if d.is_negative() {
        if (4 - abs % 4) % 4 == 1 { abs } else { 4 * abs }
    } else if abs % 4 == 1 {
        abs
    } else {
        4 * abs
    };
    if conductor > CYCLOTOMIC_SQRT_CONDUCTOR {
        return None;
    }
    // product of sqrt(q*) over odd primes q | d, times a 2-part and a sign fix
    let mut root = CycloNumber::one();
    let mut star = BigInt::one();
    for (q, _) in crate::arith::factorize(abs) {
        if q == 2 {
            continue;
        }
        root = &root * &quadratic_gauss_sum(q);
        star *= if q % 4 == 1 { q as i64 } else { -(q as i64) };
    }
    // remaining factor r = d / star is one of +-1, +-2
    let rest = d / &star;
    let extra = match i64::try_from(rest).ok()? {
        1 => CycloNumber::one(),
        -1 => CycloNumber::zeta(4),
        2 => CycloNumber::zeta(8) + CycloNumber::zeta_pow(8, -1),
        -2 => CycloNumber::zeta(8) + CycloNumber::zeta_pow(8, 3),
        _ => return None,
    };
    root = &root * &extra;
    // the product is +-sqrt(d); pick the principal sign
    let (re, im) = root.embed_f64();
    let principal = if d.is_negative() { im > 0.0 } else { re > 0.0 };
    Some(if principal { root } else { -root })
}

// sum_a (a/q) zeta_q^a = sqrt(q*) with the principal sign
fn quadratic_gauss_sum(q: u64) -> CycloNumber {
    let squares: std::collections::BTreeSet<u64> = (1..q).map(|a| a * a % q).collect();
    let terms = (1..q).map(|a| {
        let s = if squares.contains(&a) { 1 } else { -1 };
        (a as i64, BigRational::from_integer(s.into()))
    });
    CycloNumber::from_exponents(q, terms)
}

/// Roots `(alpha, beta)` of `X^2 - t X + n`, with `alpha = t/2 + sqrt(t^2 - 4n)/2`
/// for the principal square root.
pub fn hecke_roots(t: &CycloNumber, n: &CycloNumber) -> (QuadNumber, QuadNumber) {
    let disc = &(t * t) - &n.scale(&BigRational::from_integer(4.into()));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let root = sqrt_of(&disc).scale_cyclo(&CycloNumber::from_rational(half.clone()));
    let mid = QuadNumber::from_cyclo(t.scale(&half));
    let alpha = mid.try_add(&root).expect("radicand shared");
    let beta = mid.try_sub(&root).expect("radicand shared");
    (alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> CycloNumber {
        CycloNumber::from_integer(n)
    }

    #[test]
    fn cyclotomic_square_roots() {
        for d in [-1i64, 2, -2, 3, -3, 5, -7, -11, 13, -15, 21, 6, -6, 10] {
            let r = sqrt_of_integer(&BigInt::from(d));
            let c = r.as_cyclo().unwrap_or_else(|| panic!("sqrt({d}) not cyclotomic"));
            assert_eq!(c * c, int(d), "d = {d}");
            let (re, im) = c.embed_f64();
            if d > 0 {
                assert!(re > 0.0 && im.abs() < 1e-12);
            } else {
                assert!(im > 0.0 && re.abs() < 1e-12);
            }
        }
        let r = sqrt_of_integer(&BigInt::from(72));
        let c = r.as_cyclo().unwrap();
        assert_eq!(c * c, int(72));
    }

    #[test]
    fn symbolic_roots_for_delta_at_three() {
        // X^2 - 252 X + 3^11: disc = -645084 = 18^2 * (-1991)
        let (a, b) = hecke_roots(&int(252), &int(177147));
        assert!(!a.is_cyclotomic());
        assert_eq!(a.radicand(), Some(&int(-1991)));
        let sum = a.try_add(&b).unwrap();
        let prod = a.try_mul(&b).unwrap();
        assert_eq!(sum.as_cyclo(), Some(&int(252)));
        assert_eq!(prod.as_cyclo(), Some(&int(177147)));
        let inv = a.inv().unwrap();
        assert_eq!(inv.try_mul(&a).unwrap().as_cyclo(), Some(&int(1)));
        assert!(a.embed_f64().1 > 0.0);
    }

    #[test]
    fn level_eleven_roots_are_cyclotomic() {
        // X^2 + X + 3 has discriminant -11
        let (a, b) = hecke_roots(&int(-1), &int(3));
        let a = a.as_cyclo().unwrap().clone();
        let b = b.as_cyclo().unwrap().clone();
        assert_eq!(&a + &b, int(-1));
        assert_eq!(&a * &b, int(3));
        assert_eq!(a.modulus(), 11);
    }

    #[test]
    fn zero_detection_when_radicand_is_square() {
        // sqrt(zeta_4) is zeta_8; a = zeta_8, b = -1, D = zeta_4 gives 0
        let q = QuadNumber { a: CycloNumber::zeta(8), b: int(-1), d: CycloNumber::zeta(4) };
        assert!(q.is_zero());
        let q = QuadNumber { a: CycloNumber::zeta(8), b: int(1), d: CycloNumber::zeta(4) };
        assert!(!q.is_zero());
        let inv = q.inv().unwrap();
        assert!(inv.try_mul(&q).unwrap().embed(30).dist(&ComplexAP::one(30)) < 1e-25);
    }

    #[test]
    fn incompatible_radicands() {
        let x = sqrt_of_integer(&BigInt::from(-1991));
        let y = sqrt_of_integer(&BigInt::from(-429959));
        assert!(matches!(x.try_add(&y), Err(Error::IncompatibleRadicands(_))));
        assert!(x.try_mul(&x).unwrap().as_cyclo() == Some(&int(-1991)));
    }

    #[test]
    fn json_round_trip() {
        let (a, _) = hecke_roots(&int(252), &int(177147));
        let back = QuadNumber::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }
}
