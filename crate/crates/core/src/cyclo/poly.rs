//! Dense polynomial helpers over `Z` and `Q` backing the cyclotomic field type.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{factorize, radical};

type Cache = RwLock<HashMap<u64, Arc<Vec<i64>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of the `m`-th cyclotomic polynomial, constant term first.
pub(crate) fn cyclotomic(m: u64) -> Arc<Vec<i64>> {
    if let Some(p) = cache().read().expect("cyclotomic cache poisoned").get(&m) {
        return Arc::clone(p);
    }
    let poly = Arc::new(compute_cyclotomic(m));
    cache()
        .write()
        .expect("cyclotomic cache poisoned")
        .insert(m, Arc::clone(&poly));
    poly
}

// Phi_{nq}(x) = Phi_n(x^q) / Phi_n(x) for q prime not dividing n, then
// Phi_m(x) = Phi_{rad m}(x^{m / rad m}).
fn compute_cyclotomic(m: u64) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic polynomial of modulus 0");
    let mut phi: Vec<i128> = vec![-1, 1];
    for (q, _) in factorize(m) {
        let stretched = substitute_power(&phi, q as usize);
        phi = divide_monic(&stretched, &phi);
    }
    let phi = substitute_power(&phi, (m / radical(m)) as usize);
    phi.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

fn substitute_power(poly: &[i128], k: usize) -> Vec<i128> {
    let mut out = vec![0i128; (poly.len() - 1) * k + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i * k] = c;
    }
    out
}

fn divide_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i128; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// Reduces a polynomial (any length) modulo the monic polynomial `modulus`,
/// returning exactly `deg(modulus)` coefficients.
pub(crate) fn reduce_mod(mut poly: Vec<BigRational>, modulus: &[i64]) -> Vec<BigRational> {
    let d = modulus.len() - 1;
    if poly.len() <= d {
        poly.resize(d, BigRational::zero());
        return poly;
    }
    for deg in (d..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[deg], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for (i, &m) in modulus[..d].iter().enumerate() {
            if m != 0 {
                let t = &c * BigInt::from(m);
                poly[deg - d + i] -= t;
            }
        }
    }
    poly.truncate(d);
    poly
}

pub(crate) fn mul_dense(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn sub_scaled_shifted(a: &mut Vec<BigRational>, b: &[BigRational], c: &BigRational, shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigRational::zero());
    }
    for (i, y) in b.iter().enumerate() {
        if !y.is_zero() {
            a[i + shift] -= c * y;
        }
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = &rem[rem.len() - 1] * &lead_inv;
        sub_scaled_shifted(&mut rem, b, &c, shift);
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    (quot, rem)
}

/// Inverse of `a` modulo the (irreducible) integer polynomial `modulus`, via the
/// extended Euclidean algorithm over `Q[x]`. `None` when `a` is zero modulo it.
pub(crate) fn inverse_mod(a: &[BigRational], modulus: &[i64]) -> Option<Vec<BigRational>> {
    let mut r0: Vec<BigRational> = modulus
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    // Invariant: s_i * a == r_i (mod modulus).
    let mut s0: Vec<BigRational> = Vec::new();
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while r1.len() > 1 {
        let (q, r) = poly_divrem(&r0, &r1);
        let qs = mul_dense(&q, &s1);
        let mut s2 = s0.clone();
        if s2.len() < qs.len() {
            s2.resize(qs.len(), BigRational::zero());
        }
        for (i, c) in qs.into_iter().enumerate() {
            s2[i] -= c;
        }
        trim(&mut s2);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        if r1.is_empty() {
            // gcd is non-constant: modulus was reducible relative to a.
            return None;
        }
    }
    let c = r1[0].recip();
    Some(s1.into_iter().map(|x| x * &c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic(1), vec![-1, 1]);
        assert_eq!(*cyclotomic(2), vec![1, 1]);
        assert_eq!(*cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(*cyclotomic(9), vec![1, 0, 0, 1, 0, 0, 1]);
        // Phi_105 is the first with a coefficient -2.
        assert!(cyclotomic(105).contains(&-2));
        assert_eq!(cyclotomic(105).len(), 49);
    }

    #[test]
    fn divides_x_to_the_m_minus_one() {
        // x^m - 1 = prod_{d | m} Phi_d(x)
        for m in [6u64, 10, 12, 15, 18, 20] {
            let mut prod: Vec<i128> = vec![1];
            for d in crate::arith::divisors(m) {
                let phi: Vec<i128> = cyclotomic(d).iter().map(|&c| c as i128).collect();
                let mut out = vec![0i128; prod.len() + phi.len() - 1];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in phi.iter().enumerate() {
                        out[i + j] += a * b;
                    }
                }
                prod = out;
            }
            let mut expected = vec![0i128; m as usize + 1];
            expected[0] = -1;
            expected[m as usize] = 1;
            assert_eq!(prod, expected, "m = {m}");
        }
    }
}
