//! Shared inputs for the criterion benches.

use rankin_core::forms::{builtin, DELTA_LABEL, LEVEL11_LABEL};
use rankin_core::{CycloNumber, Eigenform};

/// A dense element of `Q(zeta_m)` with small rational coefficients.
pub fn dense_cyclo(m: u64, seed: i64) -> CycloNumber {
    (0..m as i64)
        .map(|k| &CycloNumber::fraction((k * 7 + seed) % 11 - 5, 1 + (k + seed) % 4) * &CycloNumber::zeta_pow(m, k))
        .sum()
}

/// Delta and the level 11 newform, with eigenvalues for primes below `bound`.
pub fn delta_and_f11(bound: u64) -> (Eigenform, Eigenform) {
    let d = builtin(DELTA_LABEL, 5, bound).expect("built in").expect("valid");
    let f = builtin(LEVEL11_LABEL, 5, bound).expect("built in").expect("valid");
    (d, f)
}
