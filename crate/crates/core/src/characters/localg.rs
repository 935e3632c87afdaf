use std::fmt;

use num_rational::BigRational;

use super::DirichletCharacter;
use crate::arith::{prime_power, rational_pow};
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};

/// A locally algebraic character `x -> x^n chi(x)` of `Z_p^x`, written
/// additively as `n + chi`. The finite part is stored as a primitive character
/// of `p`-power conductor, so equality is equality of characters of `Z_p^x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocAlgChar {
    n: i64,
    chi: DirichletCharacter,
    p: u64,
}

impl LocAlgChar {
    pub fn new(n: i64, chi: DirichletCharacter, p: u64) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::InvalidCharacter(format!("{p} is not prime")));
        }
        let chi = chi.primitive_part();
        let c = chi.conductor();
        if c != 1 && prime_power(c).map(|(q, _)| q) != Some(p) {
            return Err(Error::InvalidCharacter(format!(
                "finite part has conductor {c}, not a power of {p}"
            )));
        }
        Ok(LocAlgChar { n, chi, p })
    }

    /// The algebraic character `x -> x^n`.
    pub fn integer(n: i64, p: u64) -> Self {
        LocAlgChar::new(n, DirichletCharacter::trivial(1), p).expect("integer weight")
    }

    /// `w(kappa) = n`.
    pub fn weight(&self) -> i64 {
        self.n
    }

    pub fn finite_part(&self) -> &DirichletCharacter {
        &self.chi
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_algebraic(&self) -> bool {
        self.chi.is_trivial()
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        LocAlgChar::new(self.n + other.n, self.chi.mul(&other.chi), self.p)
    }

    pub fn neg(&self) -> Self {
        LocAlgChar { n: -self.n, chi: self.chi.inv(), p: self.p }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// `kappa + m` for an integer `m`.
    pub fn shift(&self, m: i64) -> Self {
        LocAlgChar { n: self.n + m, chi: self.chi.clone(), p: self.p }
    }

    /// `k * kappa`.
    pub fn times(&self, k: i64) -> Self {
        LocAlgChar::new(self.n * k, self.chi.pow(k), self.p).expect("power of a p-power character")
    }

    /// `u^n chi(u)` for `u` prime to `p`.
    pub fn eval(&self, u: i64) -> Result<CycloNumber> {
        if u == 0 || u.rem_euclid(self.p as i64) == 0 {
            return Err(Error::NonUnit { value: u, p: self.p });
        }
        let alg = CycloNumber::from_rational(rational_pow(u, self.n));
        if self.chi.is_trivial() {
            return Ok(alg);
        }
        Ok(&alg * &self.chi.value(u))
    }

    /// The sign `kappa(-1)`, an element of `{+1, -1}` times a root of unity in
    /// general; for `p`-power-conductor characters it is `+-1`.
    pub fn sign(&self) -> CycloNumber {
        self.eval(-1).expect("-1 is a unit")
    }

    /// `u^n` as a rational, ignoring the finite part.
    pub fn algebraic_value(&self, u: i64) -> BigRational {
        rational_pow(u, self.n)
    }
}

/// `char_eval(kappa, u) = u^n chi(u)`.
pub fn char_eval(kappa: &LocAlgChar, u: i64) -> Result<CycloNumber> {
    kappa.eval(u)
}

impl fmt::Debug for LocAlgChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LocAlgChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chi.is_trivial() {
            write!(f, "{}", self.n)
        } else {
            write!(f, "{} + {}", self.n, self.chi)
        }
    }
}
