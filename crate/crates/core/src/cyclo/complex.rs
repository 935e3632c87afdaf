//! Arbitrary-precision complex numbers, backed by `astro-float`.
//!
//! Precision is tracked in decimal digits. Every binary operation returns a
//! value whose nominal precision is the smaller of its operands' precisions;
//! internally a few guard words are carried on top of that.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision in bits for a decimal precision.
pub fn bits_for_digits(digits: u32) -> usize {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
}

pub(crate) fn float_from_bigint(n: &BigInt, bits: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::new(bits);
    }
    let hex = n.abs().to_str_radix(16);
    let mut f = with_consts(|cc| BigFloat::parse(&hex, Radix::Hex, bits, RM, cc));
    if n.is_negative() {
        f.inv_sign();
    }
    f
}

pub(crate) fn float_from_rational(q: &BigRational, bits: usize) -> BigFloat {
    let num = float_from_bigint(q.numer(), bits);
    if q.denom() == &BigInt::from(1) {
        return num;
    }
    let den = float_from_bigint(q.denom(), bits);
    num.div(&den, bits, RM)
}

fn float_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let s = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
    s.parse::<f64>().unwrap_or(f64::NAN)
}

/// Rounds the decimal rendering of `x` to `sig` significant digits.
fn format_float(x: &BigFloat, sig: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let raw = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
    let (negative, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, raw.as_str()),
    };
    let (mantissa, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let mut digits: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    // Position of the decimal point relative to the start of `digits`.
    let mut point = int_part.len() as i64 + exp;
    let lead = digits.iter().position(|&d| d != 0).unwrap_or(digits.len());
    digits.drain(..lead);
    point -= lead as i64;
    if digits.is_empty() {
        return "0".to_string();
    }
    let sig = sig.max(1) as usize;
    if digits.len() > sig {
        let round_up = digits[sig] >= 5;
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    point += 1;
                    digits.truncate(sig);
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while digits.len() > 1 && *digits.last().unwrap() == 0 {
        digits.pop();
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push((b'0' + digits[0]) as char);
    if digits.len() > 1 {
        out.push('.');
        out.extend(digits[1..].iter().map(|&d| (b'0' + d) as char));
    }
    let e = point - 1;
    if e != 0 {
        out.push_str(&format!("e{e}"));
    }
    out
}

/// A complex number `re + i*im` at an explicit decimal precision.
#[derive(Clone)]
pub struct ComplexAP {
    re: BigFloat,
    im: BigFloat,
    digits: u32,
}

impl ComplexAP {
    fn bits(&self) -> usize {
        bits_for_digits(self.digits)
    }

    pub(crate) fn from_parts(re: BigFloat, im: BigFloat, digits: u32) -> Self {
        ComplexAP { re, im, digits }
    }

    pub fn zero(digits: u32) -> Self {
        let b = bits_for_digits(digits);
        ComplexAP::from_parts(BigFloat::new(b), BigFloat::new(b), digits)
    }

    pub fn one(digits: u32) -> Self {
        ComplexAP::from_i64(1, digits)
    }

    pub fn i(digits: u32) -> Self {
        let b = bits_for_digits(digits);
        ComplexAP::from_parts(BigFloat::new(b), BigFloat::from_u64(1, b), digits)
    }

    pub fn from_i64(n: i64, digits: u32) -> Self {
        ComplexAP::from_bigint(&BigInt::from(n), digits)
    }

    pub fn from_bigint(n: &BigInt, digits: u32) -> Self {
        let b = bits_for_digits(digits);
        ComplexAP::from_parts(float_from_bigint(n, b), BigFloat::new(b), digits)
    }

    pub fn from_rational(q: &BigRational, digits: u32) -> Self {
        let b = bits_for_digits(digits);
        ComplexAP::from_parts(float_from_rational(q, b), BigFloat::new(b), digits)
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        let b = bits_for_digits(digits);
        ComplexAP::from_parts(BigFloat::from_f64(x, b), BigFloat::new(b), digits)
    }

    /// Parses a real decimal literal such as `1.0353e-6`.
    pub fn parse_real(s: &str, digits: u32) -> Result<Self> {
        let t = s.trim();
        let valid = !t.is_empty()
            && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
            && t.chars().any(|c| c.is_ascii_digit());
        if !valid {
            return Err(Error::Parse(format!("not a decimal number: {s:?}")));
        }
        let b = bits_for_digits(digits);
        let lowered = t.to_ascii_lowercase();
        let re = with_consts(|cc| BigFloat::parse(&lowered, Radix::Dec, b, RM, cc));
        if re.is_nan() || re.is_inf() {
            return Err(Error::Parse(format!("not a finite decimal number: {s:?}")));
        }
        Ok(ComplexAP::from_parts(re, BigFloat::new(b), digits))
    }

    pub fn pi(digits: u32) -> Self {
        let b = bits_for_digits(digits);
        let pi = with_consts(|cc| cc.pi(b, RM));
        ComplexAP::from_parts(pi, BigFloat::new(b), digits)
    }

    /// `exp(2 pi i k / m)`.
    pub fn root_of_unity(k: i64, m: u64, digits: u32) -> Self {
        assert!(m > 0, "root of unity of order 0");
        let k = k.rem_euclid(m as i64) as u64;
        let b = bits_for_digits(digits);
        let one = || BigFloat::from_u64(1, b);
        let zero = || BigFloat::new(b);
        let g = crate::arith::gcd(k, m);
        let (k, m) = (k / g, m / g);
        // exact values where they are cheap to get right
        match (k, m) {
            (0, _) => return ComplexAP::from_parts(one(), zero(), digits),
            (1, 2) => return ComplexAP::from_parts(one().neg(), zero(), digits),
            (1, 4) => return ComplexAP::from_parts(zero(), one(), digits),
            (3, 4) => return ComplexAP::from_parts(zero(), one().neg(), digits),
            _ => {}
        }
        let (re, im) = with_consts(|cc| {
            let pi = cc.pi(b, RM);
            let angle = pi
                .mul(&BigFloat::from_u64(2 * k, b), b, RM)
                .div(&BigFloat::from_u64(m, b), b, RM);
            (angle.cos(b, RM, cc), angle.sin(b, RM, cc))
        });
        ComplexAP::from_parts(re, im, digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Rounds the nominal precision down to `digits`.
    pub fn with_digits(mut self, digits: u32) -> Self {
        if digits < self.digits {
            let b = bits_for_digits(digits);
            let _ = self.re.set_precision(b, RM);
            let _ = self.im.set_precision(b, RM);
            self.digits = digits;
        }
        self
    }

    pub fn real(&self) -> ComplexAP {
        ComplexAP::from_parts(self.re.clone(), BigFloat::new(self.bits()), self.digits)
    }

    pub fn imag(&self) -> ComplexAP {
        ComplexAP::from_parts(self.im.clone(), BigFloat::new(self.bits()), self.digits)
    }

    pub fn re_f64(&self) -> f64 {
        float_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        float_to_f64(&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let digits = self.digits.min(o.digits);
        let b = bits_for_digits(digits);
        ComplexAP::from_parts(self.re.add(&o.re, b, RM), self.im.add(&o.im, b, RM), digits)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let digits = self.digits.min(o.digits);
        let b = bits_for_digits(digits);
        ComplexAP::from_parts(self.re.sub(&o.re, b, RM), self.im.sub(&o.im, b, RM), digits)
    }

    pub fn neg(&self) -> Self {
        ComplexAP::from_parts(self.re.neg(), self.im.neg(), self.digits)
    }

    pub fn conj(&self) -> Self {
        ComplexAP::from_parts(self.re.clone(), self.im.neg(), self.digits)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let digits = self.digits.min(o.digits);
        let b = bits_for_digits(digits);
        if self.im.is_zero() && o.im.is_zero() {
            return ComplexAP::from_parts(self.re.mul(&o.re, b, RM), BigFloat::new(b), digits);
        }
        let re = self.re.mul(&o.re, b, RM).sub(&self.im.mul(&o.im, b, RM), b, RM);
        let im = self.re.mul(&o.im, b, RM).add(&self.im.mul(&o.re, b, RM), b, RM);
        ComplexAP::from_parts(re, im, digits)
    }

    /// `|z|^2` as a real number.
    pub fn norm_sqr(&self) -> ComplexAP {
        let b = self.bits();
        let n = self.re.mul(&self.re, b, RM).add(&self.im.mul(&self.im, b, RM), b, RM);
        ComplexAP::from_parts(n, BigFloat::new(b), self.digits)
    }

    pub fn abs(&self) -> ComplexAP {
        let b = self.bits();
        let n = self.norm_sqr().re.sqrt(b, RM);
        ComplexAP::from_parts(n, BigFloat::new(b), self.digits)
    }

    pub fn abs_f64(&self) -> f64 {
        float_to_f64(&self.abs().re)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let digits = self.digits.min(o.digits);
        let b = bits_for_digits(digits);
        if o.im.is_zero() {
            return Ok(ComplexAP::from_parts(
                self.re.div(&o.re, b, RM),
                self.im.div(&o.re, b, RM),
                digits,
            ));
        }
        let den = o.norm_sqr().re;
        let num = self.mul(&o.conj());
        Ok(ComplexAP::from_parts(num.re.div(&den, b, RM), num.im.div(&den, b, RM), digits))
    }

    pub fn recip(&self) -> Result<Self> {
        ComplexAP::one(self.digits).div(self)
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = ComplexAP::one(self.digits);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Principal square root (branch cut along the negative real axis,
    /// `sqrt(-x) = i sqrt(x)` for `x > 0`).
    pub fn sqrt(&self) -> Self {
        let b = self.bits();
        if self.is_zero() {
            return ComplexAP::zero(self.digits);
        }
        let two = BigFloat::from_u64(2, b);
        let modulus = self.abs().re;
        let re = modulus.add(&self.re, b, RM).div(&two, b, RM).sqrt(b, RM);
        let mut im = modulus.sub(&self.re, b, RM).div(&two, b, RM).sqrt(b, RM);
        if self.im.is_negative() && !self.im.is_zero() {
            im.inv_sign();
        }
        ComplexAP::from_parts(re, im, self.digits)
    }

    /// `|self - other|` as an f64, for tolerance checks.
    pub fn dist(&self, other: &Self) -> f64 {
        self.sub(other).abs_f64()
    }

    /// Decimal rendering of the real part to the nominal precision.
    pub fn re_string(&self) -> String {
        format_float(&self.re, self.digits)
    }

    pub fn im_string(&self) -> String {
        format_float(&self.im, self.digits)
    }
}

impl fmt::Debug for ComplexAP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexAP({} + {}i, {} digits)", self.re_string(), self.im_string(), self.digits)
    }
}

impl fmt::Display for ComplexAP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re_string());
        }
        let im = self.im_string();
        match im.strip_prefix('-') {
            Some(rest) => write!(f, "{} - {}i", self.re_string(), rest),
            None => write!(f, "{} + {}i", self.re_string(), im),
        }
    }
}

impl serde::Serialize for ComplexAP {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ComplexAP", 2)?;
        st.serialize_field("re", &self.re_string())?;
        st.serialize_field("im", &self.im_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_rounds_to_significant_digits() {
        let x = ComplexAP::parse_real("1.23456789", 30).unwrap();
        assert_eq!(format_float(&x.re, 4), "1.235");
        let y = ComplexAP::parse_real("-0.000999996", 30).unwrap();
        assert_eq!(format_float(&y.re, 4), "-1e-3");
        assert_eq!(ComplexAP::from_i64(-4, 20).re_string(), "-4");
        assert_eq!(ComplexAP::from_i64(1200, 20).re_string(), "1.2e3");
    }

    #[test]
    fn roots_of_unity() {
        let z = ComplexAP::root_of_unity(1, 3, 30);
        assert!((z.re_f64() + 0.5).abs() < 1e-15);
        assert!((z.im_f64() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let cube = z.powi(3).unwrap();
        assert!(cube.dist(&ComplexAP::one(30)) < 1e-28);
    }

    #[test]
    fn principal_sqrt() {
        let m = ComplexAP::from_i64(-4, 30).sqrt();
        assert!(m.dist(&ComplexAP::i(30).mul(&ComplexAP::from_i64(2, 30))) < 1e-28);
        let z = ComplexAP::root_of_unity(1, 7, 40);
        let r = z.sqrt();
        assert!(r.mul(&r).dist(&z) < 1e-38);
        assert!(r.re_f64() > 0.0);
        // a negative real reached by subtraction carries a signed zero imaginary part
        let t = ComplexAP::from_i64(3, 30);
        let d = t.mul(&t).sub(&ComplexAP::from_i64(25, 30)).sqrt();
        assert!(d.dist(&ComplexAP::i(30).mul(&ComplexAP::from_i64(4, 30))) < 1e-28);
    }

    #[test]
    fn precision_is_the_minimum() {
        let a = ComplexAP::one(50);
        let b = ComplexAP::one(20);
        assert_eq!(a.add(&b).digits(), 20);
        assert_eq!(a.mul(&b).digits(), 20);
    }

    #[test]
    fn rejects_garbage() {
        assert!(ComplexAP::parse_real("abc", 10).is_err());
        assert!(ComplexAP::parse_real("", 10).is_err());
    }
}
