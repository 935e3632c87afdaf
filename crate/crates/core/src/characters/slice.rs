use super::LocAlgChar;
use crate::error::{Error, Result};

/// Which of the two families of weight points a slice belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `sigma = kappa_1 - 1 - tau`
    Spade,
    /// `sigma = kappa_2 + tau`
    Diamond,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Spade => "spade",
            Flavor::Diamond => "diamond",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spade" | "♠" => Ok(Flavor::Spade),
            "diamond" | "♦" => Ok(Flavor::Diamond),
            _ => Err(Error::Parse(format!("unknown slice flavor {s:?}"))),
        }
    }
}

/// Weight coordinates `(kappa_1, kappa_2, sigma)` of a parameter point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicePoint {
    pub kappa1: LocAlgChar,
    pub kappa2: LocAlgChar,
    pub sigma: LocAlgChar,
}

impl SlicePoint {
    pub fn new(kappa1: LocAlgChar, kappa2: LocAlgChar, sigma: LocAlgChar) -> Result<Self> {
        let p = kappa1.p();
        for q in [kappa2.p(), sigma.p()] {
            if q != p {
                return Err(Error::PrimeMismatch(p, q));
            }
        }
        Ok(SlicePoint { kappa1, kappa2, sigma })
    }

    /// The `sigma` coordinate the slice of the given flavor prescribes.
    pub fn expected_sigma(kappa1: &LocAlgChar, kappa2: &LocAlgChar, flavor: Flavor, tau: &LocAlgChar) -> Result<LocAlgChar> {
        match flavor {
            Flavor::Spade => kappa1.shift(-1).try_sub(tau),
            Flavor::Diamond => kappa2.try_add(tau),
        }
    }
}

pub fn slice_membership(point: &SlicePoint, flavor: Flavor, tau: &LocAlgChar) -> bool {
    SlicePoint::expected_sigma(&point.kappa1, &point.kappa2, flavor, tau)
        .map(|s| s == point.sigma)
        .unwrap_or(false)
}

/// `kappa_2 = kappa_1 - (1 + tau + tau')`, the second weight of the point above
/// `kappa_1` lying on both the spade slice for `tau` and the diamond slice for
/// `tau'`.
pub fn slice_intersection(tau: &LocAlgChar, tau_prime: &LocAlgChar, kappa1: &LocAlgChar) -> Result<LocAlgChar> {
    kappa1.shift(-1).try_sub(&tau.try_add(tau_prime)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::DirichletCharacter;

    fn int(n: i64) -> LocAlgChar {
        LocAlgChar::integer(n, 3)
    }

    #[test]
    fn membership_examples() {
        let chi = LocAlgChar::new(0, DirichletCharacter::quadratic(3).unwrap(), 3).unwrap();
        let pt = SlicePoint::new(int(12), int(2), int(11)).unwrap();
        assert!(slice_membership(&pt, Flavor::Spade, &int(0)));
        let pt = SlicePoint::new(int(12), int(2), int(2).try_add(&chi).unwrap()).unwrap();
        assert!(slice_membership(&pt, Flavor::Diamond, &chi));
        let pt = SlicePoint::new(int(12), int(2), int(5)).unwrap();
        assert!(!slice_membership(&pt, Flavor::Spade, &int(3)));
    }

    #[test]
    fn intersection_lies_on_both_slices() {
        let chi = LocAlgChar::new(0, DirichletCharacter::quadratic(3).unwrap(), 3).unwrap();
        let k2 = slice_intersection(&int(3), &chi, &int(12)).unwrap();
        assert_eq!(k2, int(8).try_add(&chi.neg()).unwrap());
        let pt = SlicePoint::new(int(12), k2, int(8)).unwrap();
        assert!(slice_membership(&pt, Flavor::Spade, &int(3)));
        assert!(slice_membership(&pt, Flavor::Diamond, &chi));
        for t in 0..=5 {
            let k2 = slice_intersection(&int(t), &int(0), &int(12)).unwrap();
            assert_eq!(k2, int(11 - t));
            let pt = SlicePoint::new(int(12), k2, int(11 - t)).unwrap();
            assert!(slice_membership(&pt, Flavor::Spade, &int(t)));
            assert!(slice_membership(&pt, Flavor::Diamond, &int(0)));
        }
    }
}
