//! Interpolation factors relating `I(f1, f2, j + chi)` to `L^imp`.
//!
//! Crystalline `f2` (both forms `p`-stabilisations):
//!
//! `I = E(f1, f2, j + chi) / (E(f1) E*(f1)) * A * L^imp(f1°, f2°, chi^-1, j)`
//!
//! and for `f2` with non-trivial `eps_(2,p)`, `chi' = chi eps_(2,p)^-1`:
//!
//! `I = (p^(j-1) / a1 a2)^r G(chi) (p^(j-1) / a1 b2)^r' G(chi') / (E(f1) E*(f1)) * A * L^imp(f1°, f2, chi^-1, j)`
//!
//! where `A = (j-1)! (j-k2)! i^(k1-k2) / (pi^(2j+1-k2) 2^(2j+k1-k2) <f1°, f1°>)`,
//! `E(f1) = 1 - b1/(p a1)`, `E*(f1) = 1 - b1/a1`, and
//!
//! `E(f1, f2, j + chi) = (1 - p^(j-1)/a1 a2)(1 - p^(j-1)/a1 b2)(1 - b1 a2/p^j)(1 - b1 b2/p^j)`
//! for `chi = 1`, `G(chi)^2 (p^(2j-2) / a1^2 a2 b2)^r` for `chi` of conductor `p^r > 1`.
//!
//! For non-trivial `chi` the crystalline factor also comes out of the unfolding
//! computation as a product of three constants:
//! `(eps1(p)/a1)^(2r)` from expressing `lambda_(f1^c)` through a Petersson
//! product at level `N p^(2r)`,
//! `p^((2k1+k2-5-2j)r) G(chi)^2 chi(N^2) / (eps1(p)^(2r) eps2(p)^r)` from the
//! Atkin–Lehner operator at `p^(2r)`, and `p^(-2r(k1+k2-2j-2))` from unfolding.
//! `chi(N^2)` cancels against the `N`-power in the definition of `I`, and the
//! Atkin–Lehner pseudo-eigenvalue `conj(lambda(f1°))` appears once in the
//! denominator (the Petersson product `<W(f_(1,beta)), f1^c>`) and once in the
//! numerator (replacing `W(f_(1,beta))` by `conj(lambda(f1°)) f1°` away from
//! `p`), so it is not part of the input. [`unfolding_block`] assembles this
//! product and agrees with [`euler_e_pair`] exactly.

use serde_json::{json, Value};

use crate::arith::{factorial, prime_power, rational_pow};
use crate::characters::{gauss_sum, DirichletCharacter};
use crate::cyclo::{ComplexAP, CycloNumber, QuadNumber};
use crate::error::{Error, Result};
use crate::lfunc::RankinSeries;
use crate::qseries::Eigenform;

/// Arithmetic shared by the exact (`QuadNumber`) and numeric (`ComplexAP`)
/// evaluations of the same formula.
pub trait Field: Clone {
    fn lift(c: &CycloNumber, digits: u32) -> Self;
    fn from_quad(q: &QuadNumber, digits: u32) -> Self;
    fn f_add(&self, o: &Self) -> Result<Self>;
    fn f_sub(&self, o: &Self) -> Result<Self>;
    fn f_mul(&self, o: &Self) -> Result<Self>;
    fn f_div(&self, o: &Self) -> Result<Self>;
    fn f_pow(&self, n: i64) -> Result<Self>;
    fn f_is_zero(&self) -> bool;
}

impl Field for QuadNumber {
    fn lift(c: &CycloNumber, _: u32) -> Self {
        QuadNumber::from_cyclo(c.clone())
    }
    fn from_quad(q: &QuadNumber, _: u32) -> Self {
        q.clone()
    }
    fn f_add(&self, o: &Self) -> Result<Self> {
        self.try_add(o)
    }
    fn f_sub(&self, o: &Self) -> Result<Self> {
        self.try_sub(o)
    }
    fn f_mul(&self, o: &Self) -> Result<Self> {
        self.try_mul(o)
    }
    fn f_div(&self, o: &Self) -> Result<Self> {
        self.try_div(o)
    }
    fn f_pow(&self, n: i64) -> Result<Self> {
        self.pow(n)
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Field for ComplexAP {
    fn lift(c: &CycloNumber, digits: u32) -> Self {
        c.embed(digits)
    }
    fn from_quad(q: &QuadNumber, digits: u32) -> Self {
        q.embed(digits)
    }
    fn f_add(&self, o: &Self) -> Result<Self> {
        Ok(self.add(o))
    }
    fn f_sub(&self, o: &Self) -> Result<Self> {
        Ok(self.sub(o))
    }
    fn f_mul(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(o))
    }
    fn f_div(&self, o: &Self) -> Result<Self> {
        self.div(o)
    }
    fn f_pow(&self, n: i64) -> Result<Self> {
        self.powi(n)
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
}

fn rat<F: Field>(base: u64, exp: i64, digits: u32) -> F {
    F::lift(&CycloNumber::from_rational(rational_pow(base as i64, exp)), digits)
}

fn one<F: Field>(digits: u32) -> F {
    F::lift(&CycloNumber::one(), digits)
}

fn nonzero<F: Field>(x: F) -> Result<F> {
    if x.f_is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(x)
}

/// The roots `alpha_i, beta_i` at `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Roots {
    pub alpha1: QuadNumber,
    pub beta1: QuadNumber,
    pub alpha2: QuadNumber,
    pub beta2: QuadNumber,
}

fn e_generic<F: Field>(a1: &F, b1: &F, p: u64, digits: u32) -> Result<F> {
    let den = nonzero(a1.f_mul(&rat(p, 1, digits))?)?;
    one::<F>(digits).f_sub(&b1.f_div(&den)?)
}

fn estar_generic<F: Field>(a1: &F, b1: &F, digits: u32) -> Result<F> {
    one::<F>(digits).f_sub(&b1.f_div(&nonzero(a1.clone())?)?)
}

// (a1, b1, a2, b2)
type Quad<F> = (F, F, F, F);

fn pair_generic<F: Field>(r: &Quad<F>, p: u64, j: i64, chi: &CharData, digits: u32) -> Result<F> {
    let (a1, b1, a2, b2) = r;
    if chi.r == 0 {
        let pj1: F = rat(p, j - 1, digits);
        let pj: F = rat(p, j, digits);
        let one = one::<F>(digits);
        let t1 = one.f_sub(&pj1.f_div(&nonzero(a1.f_mul(a2)?)?)?)?;
        let t2 = one.f_sub(&pj1.f_div(&nonzero(a1.f_mul(b2)?)?)?)?;
        let t3 = one.f_sub(&b1.f_mul(a2)?.f_div(&pj)?)?;
        let t4 = one.f_sub(&b1.f_mul(b2)?.f_div(&pj)?)?;
        return t1.f_mul(&t2)?.f_mul(&t3)?.f_mul(&t4);
    }
    // the exponent variable s is evaluated at s = j
    let g = F::lift(&chi.gauss, digits);
    let den = nonzero(a1.f_mul(a1)?.f_mul(a2)?.f_mul(b2)?)?;
    let base = rat::<F>(p, 2 * j - 2, digits).f_div(&den)?;
    g.f_mul(&g)?.f_mul(&base.f_pow(chi.r as i64)?)
}

fn gauss_euler_generic<F: Field>(
    r: &Quad<F>,
    p: u64,
    j: i64,
    chi: &CharData,
    chi_prime: &CharData,
    digits: u32,
) -> Result<F> {
    let (a1, _, a2, b2) = r;
    let pj1: F = rat(p, j - 1, digits);
    let x = pj1.f_div(&nonzero(a1.f_mul(a2)?)?)?.f_pow(chi.r as i64)?;
    let y = pj1.f_div(&nonzero(a1.f_mul(b2)?)?)?.f_pow(chi_prime.r as i64)?;
    x.f_mul(&F::lift(&chi.gauss, digits))?
        .f_mul(&y)?
        .f_mul(&F::lift(&chi_prime.gauss, digits))
}

fn unfolding_generic<F: Field>(
    r: &Quad<F>,
    p: u64,
    weights: (i64, i64, i64),
    eps: (&CycloNumber, &CycloNumber),
    chi: &CharData,
    digits: u32,
) -> Result<F> {
    let (a1, _, _, _) = r;
    let (k1, k2, j) = weights;
    let rr = chi.r as i64;
    let e1 = F::lift(eps.0, digits);
    let e2 = F::lift(eps.1, digits);
    let g = F::lift(&chi.gauss, digits);
    let lambda = e1.f_div(&nonzero(a1.clone())?)?.f_pow(2 * rr)?;
    let atkin_lehner = rat::<F>(p, (2 * k1 + k2 - 5 - 2 * j) * rr, digits)
        .f_mul(&g.f_mul(&g)?)?
        .f_div(&e1.f_pow(2 * rr)?.f_mul(&e2.f_pow(rr)?)?)?;
    let unfold = rat::<F>(p, -2 * rr * (k1 + k2 - 2 * j - 2), digits);
    lambda.f_mul(&atkin_lehner)?.f_mul(&unfold)
}

/// A `p`-power-conductor character with its exponent `r` and Gauss sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CharData {
    pub chi: DirichletCharacter,
    pub r: u32,
    pub gauss: CycloNumber,
}

impl CharData {
    pub fn new(chi: &DirichletCharacter, p: u64) -> Result<Self> {
        let chi = chi.primitive_part();
        let c = chi.conductor();
        let r = if c == 1 {
            0
        } else {
            match prime_power(c) {
                Some((q, e)) if q == p => e,
                _ => {
                    return Err(Error::Precondition(format!(
                        "character {chi} has conductor {c}, not a power of {p}"
                    )))
                }
            }
        };
        let gauss = gauss_sum(&chi);
        Ok(CharData { chi, r, gauss })
    }
}

/// `E(f1) = 1 - b1/(p a1)` from the roots.
pub fn euler_e_roots(alpha1: &QuadNumber, beta1: &QuadNumber, p: u64) -> Result<QuadNumber> {
    e_generic(alpha1, beta1, p, 0)
}

/// `E*(f1) = 1 - b1/a1` from the roots.
pub fn euler_estar_roots(alpha1: &QuadNumber, beta1: &QuadNumber) -> Result<QuadNumber> {
    estar_generic(alpha1, beta1, 0)
}

/// `E(f1, f2, j + chi)` from the roots, exactly.
pub fn euler_e_pair_roots(roots: &Roots, p: u64, j: i64, chi: &DirichletCharacter) -> Result<QuadNumber> {
    let chi = CharData::new(chi, p)?;
    let r = (roots.alpha1.clone(), roots.beta1.clone(), roots.alpha2.clone(), roots.beta2.clone());
    pair_generic(&r, p, j, &chi, 0)
}

/// `(p^(j-1)/a1 a2)^r G(chi) (p^(j-1)/a1 b2)^r' G(chi')` from the roots, exactly.
pub fn gauss_euler_prefactor_roots(
    roots: &Roots,
    p: u64,
    j: i64,
    chi: &DirichletCharacter,
    chi_prime: &DirichletCharacter,
) -> Result<QuadNumber> {
    let chi = CharData::new(chi, p)?;
    let chi_prime = CharData::new(chi_prime, p)?;
    let r = (roots.alpha1.clone(), roots.beta1.clone(), roots.alpha2.clone(), roots.beta2.clone());
    gauss_euler_generic(&r, p, j, &chi, &chi_prime, 0)
}

fn stabilised_roots(f: &Eigenform) -> Result<(QuadNumber, QuadNumber)> {
    match (f.alpha(), f.beta()) {
        (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
        _ => Err(Error::Precondition(format!("{} is not p-stabilised", f.label()))),
    }
}

/// `E(f1)` for a `p`-stabilised crystalline form.
pub fn euler_e(f1: &Eigenform) -> Result<QuadNumber> {
    let (a, b) = stabilised_roots(f1)?;
    euler_e_roots(&a, &b, f1.p())
}

/// `E*(f1)` for a `p`-stabilised crystalline form.
pub fn euler_estar(f1: &Eigenform) -> Result<QuadNumber> {
    let (a, b) = stabilised_roots(f1)?;
    euler_estar_roots(&a, &b)
}

/// Which of the two interpolation formulas applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `f2` crystalline.
    Crystalline,
    /// `f2` with non-trivial `eps_(2,p)`, `chi` and `chi'` non-trivial.
    NonCrystalline,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Crystalline => "crystalline",
            Regime::NonCrystalline => "non-crystalline",
        }
    }
}

/// Validated data for one interpolation point `j + chi`.
#[derive(Debug, Clone)]
pub struct InterpInput {
    pub f1: Eigenform,
    pub f2: Eigenform,
    pub j: i64,
    pub chi: CharData,
    /// `chi' = chi eps_(2,p)^-1`.
    pub chi_prime: CharData,
    pub roots: Roots,
    pub regime: Regime,
}

impl InterpInput {
    pub fn new(f1: Eigenform, f2: Eigenform, j: i64, chi: &DirichletCharacter) -> Result<Self> {
        let p = f1.p();
        if f2.p() != p {
            return Err(Error::PrimeMismatch(p, f2.p()));
        }
        let (k1, k2) = (f1.weight(), f2.weight());
        if !(1 <= k2 && k2 <= j && j <= k1 - 1) {
            return Err(Error::Precondition(format!(
                "j = {j} outside the critical range {k2} <= j <= {}",
                k1 - 1
            )));
        }
        if !f1.is_crystalline() {
            return Err(Error::Precondition("f1 must be crystalline".into()));
        }
        let (alpha1, beta1) = stabilised_roots(&f1)?;
        if alpha1 == beta1 {
            return Err(Error::RepeatedRoot);
        }
        let chi_data = CharData::new(chi, p)?;
        let eps2p = f2.eps_p().clone();
        let chi_prime = CharData::new(&chi_data.chi.mul(&eps2p.inv()), p)?;
        let (alpha2, beta2, regime) = if f2.is_crystalline() {
            let (a, b) = match (f2.alpha(), f2.beta()) {
                (Some(a), Some(b)) => (a.clone(), b.clone()),
                _ => f2.hecke_roots()?,
            };
            (a, b, Regime::Crystalline)
        } else {
            if eps2p.is_trivial() {
                return Err(Error::OutsideRegime("eps_(2,p) is trivial".into()));
            }
            if chi_data.r == 0 {
                return Err(Error::OutsideRegime("chi is trivial".into()));
            }
            if chi_prime.r == 0 {
                return Err(Error::OutsideRegime("chi' = chi eps_(2,p)^-1 is trivial".into()));
            }
            let (a, b) = stabilised_roots(&f2)?;
            (a, b, Regime::NonCrystalline)
        };
        let roots = Roots { alpha1, beta1, alpha2, beta2 };
        Ok(InterpInput { f1, f2, j, chi: chi_data, chi_prime, roots, regime })
    }

    pub fn p(&self) -> u64 {
        self.f1.p()
    }

    fn roots_in<F: Field>(&self, digits: u32) -> Quad<F> {
        let r = &self.roots;
        (
            F::from_quad(&r.alpha1, digits),
            F::from_quad(&r.beta1, digits),
            F::from_quad(&r.alpha2, digits),
            F::from_quad(&r.beta2, digits),
        )
    }

    fn block<F: Field>(&self, digits: u32) -> Result<F> {
        let r = self.roots_in::<F>(digits);
        match self.regime {
            Regime::Crystalline => pair_generic(&r, self.p(), self.j, &self.chi, digits),
            Regime::NonCrystalline => gauss_euler_generic(&r, self.p(), self.j, &self.chi, &self.chi_prime, digits),
        }
    }

    fn unfolding<F: Field>(&self, digits: u32) -> Result<F> {
        let r = self.roots_in::<F>(digits);
        let p = self.p() as i64;
        let e1 = self.f1.eps_n().value(p);
        let e2 = self.f2.eps_n().value(p);
        let w = (self.f1.weight(), self.f2.weight(), self.j);
        unfolding_generic(&r, self.p(), w, (&e1, &e2), &self.chi, digits)
    }
}

/// A factor kept exact when the roots share a quadratic field, numeric otherwise.
#[derive(Debug, Clone)]
pub enum Factor {
    Exact(QuadNumber),
    Numeric(ComplexAP),
}

impl Factor {
    pub fn is_exact(&self) -> bool {
        matches!(self, Factor::Exact(_))
    }

    pub fn exact(&self) -> Option<&QuadNumber> {
        match self {
            Factor::Exact(q) => Some(q),
            Factor::Numeric(_) => None,
        }
    }

    pub fn numeric(&self, digits: u32) -> ComplexAP {
        match self {
            Factor::Exact(q) => q.embed(digits),
            Factor::Numeric(c) => c.clone(),
        }
    }

    fn evaluate(digits: u32, exact: impl FnOnce() -> Result<QuadNumber>, numeric: impl FnOnce() -> Result<ComplexAP>) -> Result<Self> {
        match exact() {
            Ok(q) => Ok(Factor::Exact(q)),
            Err(Error::IncompatibleRadicands(_)) => numeric().map(|c| Factor::Numeric(c.with_digits(digits))),
            Err(e) => Err(e),
        }
    }
}

/// `E(f1, f2, j + chi)` (crystalline) or the Gauss–Euler prefactor of the
/// non-crystalline formula.
pub fn euler_e_pair(input: &InterpInput, digits: u32) -> Result<Factor> {
    Factor::evaluate(digits, || input.block::<QuadNumber>(0), || input.block::<ComplexAP>(digits))
}

/// The same crystalline factor assembled from the unfolding constants; needs `chi != 1`.
pub fn unfolding_block(input: &InterpInput, digits: u32) -> Result<Factor> {
    if input.regime != Regime::Crystalline || input.chi.r == 0 {
        return Err(Error::Precondition("the unfolding assembly needs crystalline f2 and chi != 1".into()));
    }
    Factor::evaluate(digits, || input.unfolding::<QuadNumber>(0), || input.unfolding::<ComplexAP>(digits))
}

/// For crystalline `f2` with non-trivial `chi`, both prefactor routes:
/// `G(chi)^2 (p^(2j-2)/a1^2 a2 b2)^r` and `(p^(j-1)/a1 a2)^r G(chi) (p^(j-1)/a1 b2)^r G(chi)`.
pub fn regime_overlap(input: &InterpInput) -> Result<(QuadNumber, QuadNumber)> {
    if input.regime != Regime::Crystalline || !input.f2.eps_p().is_trivial() || input.chi.r == 0 {
        return Err(Error::Precondition("overlap needs crystalline f2, trivial eps_(2,p) and chi != 1".into()));
    }
    let r = input.roots_in::<QuadNumber>(0);
    let one = pair_generic(&r, input.p(), input.j, &input.chi, 0)?;
    let two = gauss_euler_generic(&r, input.p(), input.j, &input.chi, &input.chi_prime, 0)?;
    Ok((one, two))
}

/// `(j-1)! (j-k2)! i^(k1-k2) / (pi^(2j+1-k2) 2^(2j+k1-k2) <f1°, f1°>)`, with `i = zeta_4`.
pub fn archimedean_factor(k1: i64, k2: i64, j: i64, petersson: &ComplexAP, digits: u32) -> Result<ComplexAP> {
    let fact = |n: i64| ComplexAP::from_bigint(&factorial(n as u64), digits);
    let num = fact(j - 1).mul(&fact(j - k2)).mul(&ComplexAP::i(digits).powi(k1 - k2)?);
    let den = ComplexAP::pi(digits)
        .powi(2 * j + 1 - k2)?
        .mul(&ComplexAP::from_rational(&rational_pow(2, 2 * j + k1 - k2), digits))
        .mul(petersson);
    num.div(&den)
}

/// Where the L-value comes from.
#[derive(Debug, Clone)]
pub enum LSource {
    Supplied(ComplexAP),
    /// Direct summation of `L^imp(f1°, f2, chi^-1, j)` to `n_max` terms.
    Summed { n_max: u64 },
}

/// The predicted `I(f1, f2, j + chi)` and its factors; `total` is the product
/// of the four numeric factors.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub regime: Regime,
    /// `1 / (E(f1) E*(f1))`.
    pub euler_ratio: Factor,
    /// `E(f1, f2, j + chi)`, or the non-crystalline Gauss–Euler prefactor.
    pub gauss_block: Factor,
    pub archimedean: ComplexAP,
    pub lvalue: ComplexAP,
    pub lvalue_tail_bound: Option<f64>,
    pub total: ComplexAP,
}

impl Prediction {
    /// True when every algebraic factor was computed exactly.
    pub fn exact(&self) -> bool {
        self.euler_ratio.is_exact() && self.gauss_block.is_exact()
    }

    pub fn to_json(&self, digits: u32) -> Value {
        let exact = |f: &Factor| f.exact().map(QuadNumber::to_json).unwrap_or(Value::Null);
        json!({
            "regime": self.regime.name(),
            "exact": self.exact(),
            "euler_ratio": self.euler_ratio.numeric(digits),
            "euler_ratio_exact": exact(&self.euler_ratio),
            "archimedean": self.archimedean,
            "gauss_block": self.gauss_block.numeric(digits),
            "gauss_block_exact": exact(&self.gauss_block),
            "lvalue": self.lvalue,
            "lvalue_tail_bound": self.lvalue_tail_bound,
            "total": self.total,
        })
    }
}

/// `1 / (E(f1) E*(f1))`, or [`Error::NonRegular`] when the product vanishes.
pub fn euler_ratio(f1: &Eigenform) -> Result<QuadNumber> {
    let e = euler_e(f1)?.try_mul(&euler_estar(f1)?)?;
    if e.is_zero() {
        return Err(Error::NonRegular);
    }
    e.inv()
}

/// Assembles the right-hand side of whichever formula `input.regime` selects.
pub fn predict(input: &InterpInput, digits: u32, lvalue: &LSource) -> Result<Prediction> {
    let euler_ratio = Factor::Exact(euler_ratio(&input.f1)?);
    let norm = input
        .f1
        .petersson_norm(digits)
        .ok_or_else(|| Error::MissingPeterssonNorm(input.f1.label().to_string()))?;
    let gauss_block = euler_e_pair(input, digits)?;
    let archimedean = archimedean_factor(input.f1.weight(), input.f2.weight(), input.j, &norm, digits)?;
    let (lvalue, tail) = match lvalue {
        LSource::Supplied(v) => (v.clone(), None),
        LSource::Summed { n_max } => {
            let series = RankinSeries::new(input.f1.clone(), input.f2.clone(), &input.chi.chi.inv());
            let v = series.evaluate(input.j, digits, *n_max, None)?;
            (v.value, Some(v.tail_bound))
        }
    };
    let total = euler_ratio
        .numeric(digits)
        .mul(&gauss_block.numeric(digits))
        .mul(&archimedean)
        .mul(&lvalue);
    Ok(Prediction {
        regime: input.regime,
        euler_ratio,
        gauss_block,
        archimedean,
        lvalue,
        lvalue_tail_bound: tail,
        total,
    })
}

/// [`predict`] restricted to crystalline `f2`.
pub fn predicted_i_crystalline(input: &InterpInput, digits: u32, lvalue: &LSource) -> Result<Prediction> {
    if input.regime != Regime::Crystalline {
        return Err(Error::Precondition("f2 is not crystalline".into()));
    }
    predict(input, digits, lvalue)
}

/// [`predict`] restricted to the non-crystalline regime.
pub fn predicted_i_noncrystalline(input: &InterpInput, digits: u32, lvalue: &LSource) -> Result<Prediction> {
    if input.regime != Regime::NonCrystalline {
        return Err(Error::OutsideRegime("f2 is crystalline".into()));
    }
    predict(input, digits, lvalue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{builtin, DELTA_LABEL, LEVEL11_LABEL};
    use crate::qseries::RootChoice;

    fn q(n: i64) -> QuadNumber {
        QuadNumber::from_cyclo(CycloNumber::from_integer(n))
    }

    fn stabilised(label: &str, p: u64, choice: RootChoice) -> Eigenform {
        builtin(label, p, 60).unwrap().unwrap().stabilise_at(choice, true).unwrap()
    }

    #[test]
    fn single_form_factors() {
        assert!(euler_e_roots(&q(7), &q(0), 5).unwrap().is_one_value());
        assert!(euler_estar_roots(&q(7), &q(0)).unwrap().is_one_value());
        assert!(euler_estar_roots(&q(7), &q(7)).unwrap().is_zero());
        assert!(euler_e_roots(&q(0), &q(7), 5).is_err());
        // numeric cross-check for Delta at 5
        let d = stabilised(DELTA_LABEL, 5, RootChoice::Plus);
        let exact = euler_e(&d).unwrap().try_mul(&euler_estar(&d).unwrap()).unwrap();
        let t = ComplexAP::from_i64(4830, 40);
        let n = ComplexAP::from_rational(&rational_pow(5, 11), 40);
        let disc = t.mul(&t).sub(&ComplexAP::from_i64(4, 40).mul(&n)).sqrt();
        let two = ComplexAP::from_i64(2, 40);
        let a = t.add(&disc).div(&two).unwrap();
        let b = t.sub(&disc).div(&two).unwrap();
        let one = ComplexAP::one(40);
        let e = one.sub(&b.div(&a.mul(&ComplexAP::from_i64(5, 40))).unwrap());
        let es = one.sub(&b.div(&a).unwrap());
        assert!(exact.embed(40).dist(&e.mul(&es)) < 1e-20);
    }

    trait IsOne {
        fn is_one_value(&self) -> bool;
    }
    impl IsOne for QuadNumber {
        fn is_one_value(&self) -> bool {
            self.try_sub(&q(1)).unwrap().is_zero()
        }
    }

    #[test]
    fn pair_factor_trivial_character() {
        let triv = DirichletCharacter::trivial(1);
        // a1 a2 = p^(j-1) kills the first bracket
        let roots = Roots { alpha1: q(9), beta1: q(0), alpha2: q(3), beta2: q(5) };
        assert!(euler_e_pair_roots(&roots, 3, 4, &triv).unwrap().is_zero());
        let roots = Roots { alpha1: q(2), beta1: q(5), alpha2: q(7), beta2: q(-3) };
        let swapped = Roots { alpha2: q(-3), beta2: q(7), ..roots.clone() };
        assert_eq!(
            euler_e_pair_roots(&roots, 5, 3, &triv).unwrap(),
            euler_e_pair_roots(&swapped, 5, 3, &triv).unwrap()
        );
    }

    #[test]
    fn pair_factor_quadratic_character() {
        let d = stabilised(DELTA_LABEL, 3, RootChoice::Plus);
        let f = stabilised(LEVEL11_LABEL, 3, RootChoice::Plus);
        let chi = DirichletCharacter::quadratic(3).unwrap();
        let input = InterpInput::new(d.clone(), f.clone(), 10, &chi).unwrap();
        let got = euler_e_pair(&input, 30).unwrap();
        let got = got.exact().expect("exact").clone();
        // G(chi)^2 3^18 / (a1^2 a2 b2), assembled by hand
        let g = QuadNumber::from_cyclo(gauss_sum(&chi));
        let a1 = d.alpha().unwrap();
        let a2b2 = QuadNumber::from_cyclo(CycloNumber::from_integer(3));
        let den = a1.try_mul(a1).unwrap().try_mul(&a2b2).unwrap();
        let expect = g.try_mul(&g).unwrap().try_mul(&q(3i64.pow(18))).unwrap().try_div(&den).unwrap();
        assert_eq!(got, expect);
        let unf = unfolding_block(&input, 30).unwrap();
        assert_eq!(unf.exact().unwrap(), &got);
    }

    #[test]
    fn regime_overlap_agrees() {
        let d = stabilised(DELTA_LABEL, 3, RootChoice::Minus);
        let f = stabilised(LEVEL11_LABEL, 3, RootChoice::Plus);
        for chi in crate::characters::primitive_characters(9).into_iter().chain([DirichletCharacter::quadratic(3).unwrap()]) {
            for j in [2, 7, 11] {
                let input = InterpInput::new(d.clone(), f.clone(), j, &chi).unwrap();
                let (a, b) = regime_overlap(&input).unwrap();
                assert_eq!(a, b, "chi = {chi}, j = {j}");
            }
        }
    }

    #[test]
    fn prediction_audit() {
        let d = stabilised(DELTA_LABEL, 5, RootChoice::Plus);
        let f = stabilised(LEVEL11_LABEL, 5, RootChoice::Plus);
        let triv = DirichletCharacter::trivial(1);
        let input = InterpInput::new(d.clone(), f.clone(), 10, &triv).unwrap();
        let digits = 30;
        let l = LSource::Supplied(ComplexAP::parse_real("1.25", digits).unwrap());
        let pr = predict(&input, digits, &l).unwrap();
        let product = pr
            .euler_ratio
            .numeric(digits)
            .mul(&pr.gauss_block.numeric(digits))
            .mul(&pr.archimedean)
            .mul(&pr.lvalue);
        assert_eq!(product.re_string(), pr.total.re_string());
        let zero = predict(&input, digits, &LSource::Supplied(ComplexAP::zero(digits))).unwrap();
        assert!(zero.total.is_zero());
        assert!(!zero.archimedean.is_zero());
        // doubling the norm halves the output
        let norm = d.petersson_norm_string().unwrap();
        let doubled = ComplexAP::parse_real(norm, digits).unwrap().mul(&ComplexAP::from_i64(2, digits));
        let d2 = d.clone().with_petersson_norm(Some(doubled.re_string())).unwrap();
        let input2 = InterpInput::new(d2, f.clone(), 10, &triv).unwrap();
        let half = predict(&input2, digits, &l).unwrap();
        let ratio = pr.total.div(&half.total).unwrap();
        assert!(ratio.dist(&ComplexAP::from_i64(2, digits)) < 1e-20);
        let bare = d.clone().with_petersson_norm(None).unwrap();
        let input3 = InterpInput::new(bare, f.clone(), 10, &triv).unwrap();
        assert!(matches!(predict(&input3, digits, &l), Err(Error::MissingPeterssonNorm(_))));
        let g = builtin(LEVEL11_LABEL, 5, 60).unwrap().unwrap().stabilise_at(RootChoice::Plus, true).unwrap();
        assert!(InterpInput::new(g.clone(), g, 2, &triv).is_err());
    }

    #[test]
    fn noncrystalline_regime() {
        // a synthetic weight-2 form new at 3 with eps_3 of conductor 9
        let eps3 = crate::characters::primitive_characters(9)
            .into_iter()
            .find(|c| !c.is_even())
            .unwrap();
        let mut ap = std::collections::BTreeMap::new();
        ap.insert(2, CycloNumber::zero());
        ap.insert(3, CycloNumber::from_integer(1));
        let f2 = Eigenform::p_new("g", 3, 1, 3, DirichletCharacter::trivial(1), eps3.clone(), ap).unwrap();
        let d = stabilised(DELTA_LABEL, 3, RootChoice::Plus);
        let chi = DirichletCharacter::quadratic(3).unwrap();
        let input = InterpInput::new(d.clone(), f2.clone(), 5, &chi).unwrap();
        assert_eq!(input.regime, Regime::NonCrystalline);
        assert_eq!((input.chi.r, input.chi_prime.r), (1, 2));
        let block = euler_e_pair(&input, 30).unwrap();
        let block = block.exact().unwrap();
        // G(chi) G(chi') against direct Gauss sums
        let gg = &gauss_sum(&chi) * &gauss_sum(&chi.mul(&eps3.inv()).primitive_part());
        let a1 = d.alpha().unwrap();
        // p^(j-1) = 81, a2 = 1, b2 = 3^2 / a2
        let x = q(81).try_div(a1).unwrap();
        let b2 = q(9);
        let y = q(81).try_div(&a1.try_mul(&b2).unwrap()).unwrap().pow(2).unwrap();
        let expect = x.try_mul(&y).unwrap().try_mul(&QuadNumber::from_cyclo(gg)).unwrap();
        assert_eq!(block, &expect);
        // chi = eps_p makes chi' trivial
        let eps_as_chi = eps3.clone();
        assert!(matches!(
            InterpInput::new(d.clone(), f2.clone(), 5, &eps_as_chi),
            Err(Error::OutsideRegime(_))
        ));
        assert!(matches!(
            InterpInput::new(d, f2, 5, &DirichletCharacter::trivial(1)),
            Err(Error::OutsideRegime(_))
        ));
    }
}
