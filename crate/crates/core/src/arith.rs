//! Elementary integer number theory used throughout the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Prime factorisation by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, e))` when `n = p^e` with `e >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn radical(n: u64) -> u64 {
    factorize(n).into_iter().map(|(p, _)| p).product()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Primes strictly below `bound`.
pub fn primes_below(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

/// Smallest-prime-factor table for `0..bound`; entries 0 and 1 are 0.
pub fn smallest_prime_factors(bound: usize) -> Vec<u32> {
    let mut spf = vec![0u32; bound];
    for i in 2..bound {
        if spf[i] == 0 {
            let mut j = i;
            while j < bound {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// `base^exp` as an exact rational; negative exponents invert.
pub fn rational_pow(base: i64, exp: i64) -> BigRational {
    assert!(base != 0 || exp >= 0, "0 raised to a negative power");
    let magnitude = num_traits::pow(BigInt::from(base), exp.unsigned_abs() as usize);
    if exp >= 0 {
        BigRational::from_integer(magnitude)
    } else {
        BigRational::new(BigInt::one(), magnitude)
    }
}

/// `base^exp` for a rational base and integer exponent.
pub fn rational_powi(base: &BigRational, exp: i64) -> BigRational {
    let r = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp >= 0 {
        r
    } else {
        r.recip()
    }
}

/// Squarefree decomposition `n = s^2 * d` of a non-zero integer. Trial division
/// runs up to `trial_bound`; a leftover cofactor is kept in `d` unless it is a
/// perfect square.
pub fn square_part(n: &BigInt, trial_bound: u64) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.abs();
    let mut square = BigInt::one();
    let mut free = BigInt::from(sign);
    let mut d = 2u64;
    while d <= trial_bound {
        let bd = BigInt::from(d);
        if &bd * &bd > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            e += 1;
        }
        if e > 0 {
            square *= num_traits::pow(bd.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                free *= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        square *= root;
    } else {
        free *= rest;
    }
    (square, free)
}

/// Number of divisors of `n`.
pub fn num_divisors(n: u64) -> u64 {
    factorize(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

/// Binomial coefficient as f64 (small arguments only).
pub(crate) fn binomial_f64(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorisation_and_phi() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(27), 18);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let primes = primes_below(200);
        let brute: Vec<u64> = (0..200).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, brute);
        let spf = smallest_prime_factors(100);
        assert_eq!(spf[91], 7);
        assert_eq!(spf[97], 97);
    }

    #[test]
    fn square_part_of_hecke_discriminants() {
        // 252^2 - 4 * 3^11
        let (s, d) = square_part(&BigInt::from(-645084), 1000);
        assert_eq!(s, BigInt::from(18));
        assert_eq!(d, BigInt::from(-1991));
        let (s, d) = square_part(&BigInt::from(-11), 1000);
        assert_eq!((s, d), (BigInt::from(1), BigInt::from(-11)));
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rational_pow(4, -1), BigRational::new(1.into(), 4.into()));
        assert_eq!(rational_pow(-2, 3), BigRational::from_integer((-8).into()));
        assert_eq!(rational_pow(7, 0), BigRational::one());
    }
}
