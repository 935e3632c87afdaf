//! Eisenstein series with `zeta_N`-twisted divisor sums, and the exact
//! identities relating them.
//!
//! All four families have `a_0 = 0` and coefficients of the shape
//! `sum_{d | n} A(d) B(n/d) (zeta_N^d + s zeta_N^(-d))` for a sign `s`.

use std::fmt;

use crate::arith::{gcd, is_prime, prime_power, rational_pow};
use crate::characters::{DirichletCharacter, Flavor, LocAlgChar};
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::qseries::QExpansion;

/// One of the four Eisenstein families, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum EisensteinSpec {
    /// `E^[p]_k`: `sum_{d | n} d^(k-1) (zeta_N^d + (-1)^k zeta_N^(-d))`, `p` not dividing `n`.
    E { k: LocAlgChar, level: u64 },
    /// `F^[p]_k`: as `E` with the exponent on `n/d`.
    F { k: LocAlgChar, level: u64 },
    /// `E_N(kappa1, kappa2, sigma)`.
    Script { kappa1: LocAlgChar, kappa2: LocAlgChar, sigma: LocAlgChar, level: u64 },
    /// The level `N p^r` series twisted by `chi` in the twist identity.
    Tilde { k1: i64, k2: i64, j: i64, chi: DirichletCharacter, level: u64 },
}

impl EisensteinSpec {
    pub fn expand(&self, prec: usize) -> Result<QExpansion> {
        match self {
            EisensteinSpec::E { k, level } => eis_e(k, *level, k.p(), prec),
            EisensteinSpec::F { k, level } => eis_f(k, *level, k.p(), prec),
            EisensteinSpec::Script { kappa1, kappa2, sigma, level } => {
                eis_script(kappa1, kappa2, sigma, *level, prec)
            }
            EisensteinSpec::Tilde { k1, k2, j, chi, level } => eis_tilde(*k1, *k2, *j, chi, *level, prec),
        }
    }

    pub fn level(&self) -> u64 {
        match self {
            EisensteinSpec::E { level, .. }
            | EisensteinSpec::F { level, .. }
            | EisensteinSpec::Script { level, .. }
            | EisensteinSpec::Tilde { level, .. } => *level,
        }
    }
}

impl fmt::Display for EisensteinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EisensteinSpec::E { k, level } => write!(f, "E[{}](k={k}, N={level})", k.p()),
            EisensteinSpec::F { k, level } => write!(f, "F[{}](k={k}, N={level})", k.p()),
            EisensteinSpec::Script { kappa1, kappa2, sigma, level } => {
                write!(f, "E_{level}({kappa1}, {kappa2}, {sigma})")
            }
            EisensteinSpec::Tilde { k1, k2, j, chi, level } => {
                write!(f, "Etilde(k1={k1}, k2={k2}, j={j}, chi={chi}, N={level})")
            }
        }
    }
}

fn check_level(level: u64, p: u64) -> Result<()> {
    if level == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if gcd(level, p) != 1 {
        return Err(Error::NotCoprime { n: level, p });
    }
    Ok(())
}

fn check_prime(kappa: &LocAlgChar, p: u64) -> Result<()> {
    if kappa.p() != p {
        return Err(Error::PrimeMismatch(kappa.p(), p));
    }
    Ok(())
}

/// `zeta_N^d + sign * zeta_N^(-d)` for `d < len`.
fn zeta_pairs(level: u64, sign: &CycloNumber, len: usize) -> Result<Vec<CycloNumber>> {
    (0..len)
        .map(|d| {
            let plus = CycloNumber::zeta_pow(level, d as i64);
            let minus = CycloNumber::zeta_pow(level, -(d as i64));
            plus.try_add(&sign.try_mul(&minus)?)
        })
        .collect()
}

// sum over factorisations n = d e with keep(n, d, e) of left[d] * right[e]
fn convolve(
    prec: usize,
    left: &[Option<CycloNumber>],
    right: &[Option<CycloNumber>],
    keep: impl Fn(usize, usize, usize) -> bool,
) -> Result<Vec<CycloNumber>> {
    let mut out = vec![CycloNumber::zero(); prec];
    for d in 1..prec {
        let Some(l) = &left[d] else { continue };
        if l.is_zero() {
            continue;
        }
        for e in 1..=(prec - 1) / d {
            let n = d * e;
            if !keep(n, d, e) {
                continue;
            }
            let Some(r) = &right[e] else { continue };
            let term = if r.is_one() { l.clone() } else { l.try_mul(r)? };
            out[n] = out[n].try_add(&term)?;
        }
    }
    Ok(out)
}

// kappa(u) for u < len prime to p, None elsewhere
fn char_table(kappa: &LocAlgChar, len: usize) -> Result<Vec<Option<CycloNumber>>> {
    let p = kappa.p() as usize;
    (0..len)
        .map(|u| if u == 0 || u % p == 0 { Ok(None) } else { kappa.eval(u as i64).map(Some) })
        .collect()
}

fn ones(len: usize) -> Vec<Option<CycloNumber>> {
    vec![Some(CycloNumber::one()); len]
}

fn weighted(pairs: &[CycloNumber], table: Vec<Option<CycloNumber>>) -> Result<Vec<Option<CycloNumber>>> {
    table
        .into_iter()
        .zip(pairs)
        .map(|(t, z)| t.map(|t| t.try_mul(z)).transpose())
        .collect()
}

/// `E^[p]_k`: for `p` not dividing `n`,
/// `a_n = sum_{d | n} d^(k-1) (zeta_N^d + (-1)^k zeta_N^(-d))`, where
/// `d^(k-1)` and `(-1)^k` are `char_eval(k - 1, d)` and `char_eval(k, -1)`.
pub fn eis_e(k: &LocAlgChar, level: u64, p: u64, prec: usize) -> Result<QExpansion> {
    check_level(level, p)?;
    check_prime(k, p)?;
    let pairs = zeta_pairs(level, &k.sign(), prec)?;
    let left = weighted(&pairs, char_table(&k.shift(-1), prec)?)?;
    let p = p as usize;
    let coeffs = convolve(prec, &left, &ones(prec), |n, _, _| n % p != 0)?;
    Ok(QExpansion::new(coeffs).with_weight(Some(k.clone())))
}

/// `F^[p]_k`: for `p` not dividing `n`,
/// `a_n = sum_{d | n} (n/d)^(k-1) (zeta_N^d + (-1)^k zeta_N^(-d))`.
pub fn eis_f(k: &LocAlgChar, level: u64, p: u64, prec: usize) -> Result<QExpansion> {
    check_level(level, p)?;
    check_prime(k, p)?;
    let pairs = zeta_pairs(level, &k.sign(), prec)?;
    let left: Vec<Option<CycloNumber>> = pairs.into_iter().map(Some).collect();
    let right = char_table(&k.shift(-1), prec)?;
    let p = p as usize;
    let coeffs = convolve(prec, &left, &right, |n, _, _| n % p != 0)?;
    Ok(QExpansion::new(coeffs).with_weight(Some(k.clone())))
}

/// `E_N(kappa1, kappa2, sigma)`: for `p` not dividing `n`,
/// `a_n = sum_{d | n} d^(sigma - kappa2) (n/d)^(kappa1 - sigma - 1)
/// (zeta_N^d + (-1)^(kappa1 - kappa2) zeta_N^(-d))`.
///
/// The sign `(-1)^(kappa1 - kappa2)` is read as `char_eval(kappa1 - kappa2, -1)`.
/// The weight-character of the result is `kappa1 - kappa2`.
pub fn eis_script(
    kappa1: &LocAlgChar,
    kappa2: &LocAlgChar,
    sigma: &LocAlgChar,
    level: u64,
    prec: usize,
) -> Result<QExpansion> {
    let p = kappa1.p();
    check_prime(kappa2, p)?;
    check_prime(sigma, p)?;
    check_level(level, p)?;
    let diff = kappa1.try_sub(kappa2)?;
    let pairs = zeta_pairs(level, &diff.sign(), prec)?;
    let left = weighted(&pairs, char_table(&sigma.try_sub(kappa2)?, prec)?)?;
    let right = char_table(&kappa1.try_sub(sigma)?.shift(-1), prec)?;
    let p = p as usize;
    let coeffs = convolve(prec, &left, &right, |n, _, _| n % p != 0)?;
    Ok(QExpansion::new(coeffs).with_weight(Some(diff)))
}

/// The series `sum_n sum_{d | n, p not dividing n/d}
/// d^(j-k2) (n/d)^(k1-1-j) chi(n/d)^(-2) (zeta_N^d + (-1)^(k1-k2) zeta_N^(-d)) q^n`
/// for a non-trivial `chi` of conductor `p^r`. Every `n >= 1` contributes.
/// Its `theta^chi`-twist is `eis_script(k1, k2, j + chi)`.
pub fn eis_tilde(
    k1: i64,
    k2: i64,
    j: i64,
    chi: &DirichletCharacter,
    level: u64,
    prec: usize,
) -> Result<QExpansion> {
    let (p, chi) = p_power_character(chi)?;
    check_level(level, p)?;
    if !(1 <= k2 && k2 <= j && j <= k1 - 1) {
        return Err(Error::Precondition(format!("need 1 <= k2 <= j <= k1 - 1, got k1={k1}, k2={k2}, j={j}")));
    }
    let sign = CycloNumber::from_integer(if (k1 - k2) % 2 == 0 { 1 } else { -1 });
    let pairs = zeta_pairs(level, &sign, prec)?;
    let left: Vec<Option<CycloNumber>> = pairs
        .iter()
        .enumerate()
        .map(|(d, z)| {
            if d == 0 {
                None
            } else {
                Some(z.scale(&rational_pow(d as i64, j - k2)))
            }
        })
        .collect();
    let chi_m2 = chi.pow(-2);
    let right: Vec<Option<CycloNumber>> = (0..prec)
        .map(|e| {
            if e == 0 || e as u64 % p == 0 {
                None
            } else {
                Some(chi_m2.value(e as i64).scale(&rational_pow(e as i64, k1 - 1 - j)))
            }
        })
        .collect();
    let coeffs = convolve(prec, &left, &right, |_, _, _| true)?;
    let weight = LocAlgChar::new(k1 - k2, chi_m2, p)?;
    Ok(QExpansion::new(coeffs).with_weight(Some(weight)))
}

/// The prime `p` and primitive part of a non-trivial character of `p`-power conductor.
fn p_power_character(chi: &DirichletCharacter) -> Result<(u64, DirichletCharacter)> {
    let prim = chi.primitive_part();
    let c = prim.conductor();
    if c == 1 {
        return Err(Error::Precondition("chi must be non-trivial".into()));
    }
    match prime_power(c) {
        Some((p, _)) => Ok((p, prim)),
        None => Err(Error::Precondition(format!("chi has conductor {c}, not a prime power"))),
    }
}

/// Outcome of a coefficientwise comparison of two q-expansions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub prec: usize,
    /// First index where the coefficients differ.
    pub first_mismatch: Option<usize>,
    /// Whether the weight-characters attached to both sides agree.
    pub weights_match: bool,
}

impl IdentityCheck {
    fn compare(lhs: &QExpansion, rhs: &QExpansion) -> Self {
        IdentityCheck {
            prec: lhs.prec().min(rhs.prec()),
            first_mismatch: lhs.first_mismatch(rhs),
            weights_match: lhs.weight() == rhs.weight(),
        }
    }

    pub fn holds(&self) -> bool {
        self.first_mismatch.is_none() && self.weights_match
    }
}

/// Both sides of a slice identity: `theta^tau E^[p]_(kappa1-kappa2-2tau)`
/// (flavor spade) or `theta^tau F^[p]_(kappa1-kappa2-2tau)` (diamond), and
/// `E_N(kappa1, kappa2, sigma)`.
pub fn slice_sides(
    flavor: Flavor,
    kappa1: &LocAlgChar,
    kappa2: &LocAlgChar,
    tau: &LocAlgChar,
    sigma: &LocAlgChar,
    level: u64,
    prec: usize,
) -> Result<(QExpansion, QExpansion)> {
    let p = kappa1.p();
    check_prime(tau, p)?;
    let k = kappa1.try_sub(kappa2)?.try_sub(&tau.times(2))?;
    let base = match flavor {
        Flavor::Spade => eis_e(&k, level, p, prec)?,
        Flavor::Diamond => eis_f(&k, level, p, prec)?,
    };
    let lhs = base.theta_twist(tau)?;
    let rhs = eis_script(kappa1, kappa2, sigma, level, prec)?;
    Ok((lhs, rhs))
}

/// Checks `theta^tau E^[p] = E_N(kappa1, kappa2, kappa1 - 1 - tau)` (spade)
/// or `theta^tau F^[p] = E_N(kappa1, kappa2, kappa2 + tau)` (diamond).
pub fn verify_slice_identity(
    flavor: Flavor,
    kappa1: &LocAlgChar,
    kappa2: &LocAlgChar,
    tau: &LocAlgChar,
    level: u64,
    prec: usize,
) -> Result<IdentityCheck> {
    let sigma = match flavor {
        Flavor::Spade => kappa1.shift(-1).try_sub(tau)?,
        Flavor::Diamond => kappa2.try_add(tau)?,
    };
    verify_slice_identity_at(flavor, kappa1, kappa2, tau, &sigma, level, prec)
}

/// As [`verify_slice_identity`] with the right-hand side at an explicit `sigma`.
pub fn verify_slice_identity_at(
    flavor: Flavor,
    kappa1: &LocAlgChar,
    kappa2: &LocAlgChar,
    tau: &LocAlgChar,
    sigma: &LocAlgChar,
    level: u64,
    prec: usize,
) -> Result<IdentityCheck> {
    let (lhs, rhs) = slice_sides(flavor, kappa1, kappa2, tau, sigma, level, prec)?;
    Ok(IdentityCheck::compare(&lhs, &rhs))
}

/// Checks `E_N(k1, k2, j + chi) = theta^chi(eis_tilde(k1, k2, j, chi))`.
pub fn verify_twist_identity(
    k1: i64,
    k2: i64,
    j: i64,
    chi: &DirichletCharacter,
    level: u64,
    prec: usize,
) -> Result<IdentityCheck> {
    let (p, prim) = p_power_character(chi)?;
    let tilde = eis_tilde(k1, k2, j, &prim, level, prec)?;
    let chi_p = LocAlgChar::new(0, prim, p)?;
    let lhs = tilde.theta_twist(&chi_p)?;
    let sigma = chi_p.shift(j);
    let rhs = eis_script(&LocAlgChar::integer(k1, p), &LocAlgChar::integer(k2, p), &sigma, level, prec)?;
    Ok(IdentityCheck::compare(&rhs, &lhs))
}
