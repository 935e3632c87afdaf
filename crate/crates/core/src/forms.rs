//! Built-in newforms computed from eta products: the discriminant form
//! `Delta = q prod (1 - q^n)^24` (label `1.12.a.a`) and the level-11 weight-2
//! form `q prod (1 - q^n)^2 (1 - q^(11n))^2` (label `11.2.a.a`).

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::arith::primes_below;
use crate::characters::DirichletCharacter;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::qseries::Eigenform;

pub const DELTA_LABEL: &str = "1.12.a.a";
pub const LEVEL11_LABEL: &str = "11.2.a.a";

/// `<Delta, Delta>` for the measure `dx dy` on `SL_2(Z) \ H`.
pub const DELTA_PETERSSON_NORM: &str = "1.035362056804320922347816812225e-6";

type Cache = Mutex<Option<Arc<Vec<i128>>>>;

static DELTA: Cache = Mutex::new(None);
static LEVEL11: Cache = Mutex::new(None);

fn cached(cache: &Cache, len: usize, compute: fn(usize) -> Vec<i128>) -> Arc<Vec<i128>> {
    let mut guard = cache.lock().expect("series cache poisoned");
    if let Some(s) = guard.as_ref() {
        if s.len() >= len {
            return Arc::clone(s);
        }
    }
    let s = Arc::new(compute(len.max(64)));
    *guard = Some(Arc::clone(&s));
    s
}

// dense * sparse, truncated to dense.len()
fn mul_sparse(dense: &[i128], sparse: &[(usize, i128)]) -> Vec<i128> {
    let len = dense.len();
    let mut out = vec![0i128; len];
    for &(e, c) in sparse {
        if e >= len {
            break;
        }
        for (i, &d) in dense[..len - e].iter().enumerate() {
            if d != 0 {
                out[i + e] += c * d;
            }
        }
    }
    out
}

/// `prod (1 - q^(step n))` via the pentagonal number theorem, exponents `< len`.
fn euler_product(len: usize, step: usize) -> Vec<(usize, i128)> {
    let mut terms = vec![(0usize, 1i128)];
    for k in 1.. {
        let a = k * (3 * k - 1) / 2 * step;
        let b = k * (3 * k + 1) / 2 * step;
        if a >= len {
            break;
        }
        let s = if k % 2 == 0 { 1 } else { -1 };
        terms.push((a, s));
        if b < len {
            terms.push((b, s));
        }
    }
    terms.sort_unstable();
    terms
}

/// `prod (1 - q^n)^3 = sum (-1)^m (2m + 1) q^(m(m+1)/2)`.
fn jacobi_cube(len: usize) -> Vec<(usize, i128)> {
    (0..)
        .map(|m: usize| (m * (m + 1) / 2, if m % 2 == 0 { 2 * m as i128 + 1 } else { -(2 * m as i128 + 1) }))
        .take_while(|&(e, _)| e < len)
        .collect()
}

fn to_dense(sparse: &[(usize, i128)], len: usize) -> Vec<i128> {
    let mut d = vec![0i128; len];
    for &(e, c) in sparse {
        if e < len {
            d[e] += c;
        }
    }
    d
}

fn compute_delta(len: usize) -> Vec<i128> {
    // coefficients of prod (1 - q^n)^24 up to q^(len - 2), then shift by q
    let inner = len - 1;
    let j = jacobi_cube(inner);
    let mut acc = to_dense(&j, inner);
    for _ in 0..7 {
        acc = mul_sparse(&acc, &j);
    }
    let mut out = vec![0i128; len];
    out[1..].copy_from_slice(&acc);
    out
}

fn compute_level11(len: usize) -> Vec<i128> {
    let inner = len - 1;
    let e1 = euler_product(inner, 1);
    let e11 = euler_product(inner, 11);
    let mut acc = to_dense(&e1, inner);
    acc = mul_sparse(&acc, &e1);
    acc = mul_sparse(&acc, &e11);
    acc = mul_sparse(&acc, &e11);
    let mut out = vec![0i128; len];
    out[1..].copy_from_slice(&acc);
    out
}

/// `tau(0), ..., tau(len - 1)`.
pub fn delta_series(len: usize) -> Arc<Vec<i128>> {
    cached(&DELTA, len, compute_delta)
}

/// Coefficients of the level-11 weight-2 newform.
pub fn level11_series(len: usize) -> Arc<Vec<i128>> {
    cached(&LEVEL11, len, compute_level11)
}

/// Labels of the built-in forms.
pub fn builtin_labels() -> &'static [&'static str] {
    &[DELTA_LABEL, LEVEL11_LABEL]
}

/// Level of a built-in form, or `None` for an unknown label.
pub fn builtin_level(label: &str) -> Option<u64> {
    match label {
        DELTA_LABEL | "Delta" | "delta" => Some(1),
        LEVEL11_LABEL => Some(11),
        _ => None,
    }
}

/// Smallest prime not dividing `n`.
pub fn default_prime(level: u64) -> u64 {
    (2..).find(|&p| crate::arith::is_prime(p) && level % p != 0).expect("infinitely many primes")
}

/// The built-in newform with eigenvalues `a_l` for primes `l < prime_bound`,
/// relative to the prime `p`. `None` for an unknown label.
pub fn builtin(label: &str, p: u64, prime_bound: u64) -> Option<Result<Eigenform>> {
    let (level, weight, series, norm): (u64, i64, fn(usize) -> Arc<Vec<i128>>, Option<&str>) = match label {
        DELTA_LABEL | "Delta" | "delta" => (1, 12, delta_series, Some(DELTA_PETERSSON_NORM)),
        LEVEL11_LABEL => (11, 2, level11_series, None),
        _ => return None,
    };
    let canonical = if level == 1 { DELTA_LABEL } else { LEVEL11_LABEL };
    let bound = prime_bound.max(p + 1);
    Some((|| {
        if level % p == 0 {
            return Err(Error::InvalidForm {
                field: "p".into(),
                reason: format!("{canonical} has level divisible by {p}"),
            });
        }
        let s = series(bound as usize);
        let ap: BTreeMap<u64, CycloNumber> = primes_below(bound)
            .into_iter()
            .map(|l| (l, CycloNumber::from_bigint(s[l as usize].into())))
            .collect();
        let f = Eigenform::newform(canonical, weight, level, p, DirichletCharacter::trivial(level), ap)?;
        f.with_petersson_norm(norm.map(str::to_string))
    })())
}
