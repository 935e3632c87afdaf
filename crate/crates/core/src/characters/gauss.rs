use num_rational::BigRational;
use num_traits::One;

use super::DirichletCharacter;
use crate::arith::{gcd, lcm};
use crate::cyclo::CycloNumber;

/// `G(chi) = sum_{a mod M, (a, M) = 1} chi(a) zeta_M^a`, computed over the full
/// modulus `M` of `chi`. The result lies in `Q(zeta_lcm(M, ord chi))`.
pub fn gauss_sum(chi: &DirichletCharacter) -> CycloNumber {
    let m = chi.modulus();
    if m == 1 {
        return CycloNumber::one();
    }
    let ord = chi.order();
    let big = lcm(m, ord);
    let (sm, so) = ((big / m) as i64, (big / ord) as i64);
    let terms = (1..m).filter(|&a| gcd(a, m) == 1).map(|a| {
        let k = chi.exponent(a as i64).expect("unit") as i64;
        (a as i64 * sm + k * so, BigRational::one())
    });
    CycloNumber::from_exponents(big, terms)
}
