//! The imprimitive Rankin–Selberg series
//!
//! `L^imp(f1, f2, chi, s) = L_(M)(psi, 2s + 2 - k1 - k2) * sum_{(n, N_chi) = 1} a_n(f1) a_n(f2) chi(n) n^-s`
//!
//! with `M = N1 N2 N_chi` and `psi = eps1 eps2 chi^2`. Since
//! `m^-(2s + 2 - k1 - k2) n^-s = (m^2 n)^-s m^(k1 + k2 - 2)`, the product is an
//! ordinary Dirichlet series with coefficients
//!
//! `C_N = sum_{m^2 n = N, (m, M) = 1} psi(m) m^(k1 + k2 - 2) a_n(f1) a_n(f2) chi(n)`.
//!
//! Absolute convergence uses the Deligne bound `|a_n(f)| <= d(n) n^((k-1)/2)`,
//! which gives `|C_N| <= N^w d_4(N)` with `w = (k1 + k2 - 2)/2` (the Dirichlet
//! series of `d(n)^2` is `zeta^4(s) / zeta(2s)`).

use std::collections::HashMap;
use std::sync::Mutex;

use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{binomial_f64, gcd, primes_below, rational_pow, smallest_prime_factors};
use crate::characters::DirichletCharacter;
use crate::cyclo::{ComplexAP, CycloNumber};
use crate::error::{Error, Result};
use crate::qseries::Eigenform;

/// `1 + c_1 X + ... + c_4 X^4`, the local factor `P_l(f1, f2, X)` at a good prime.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFactor {
    pub l: u64,
    pub coeffs: [CycloNumber; 5],
}

impl LocalFactor {
    /// Coefficients `e_0, ..., e_(len-1)` of `1 / P_l(X)` as a power series.
    pub fn inverse_series(&self, len: usize) -> Result<Vec<CycloNumber>> {
        let mut e: Vec<CycloNumber> = Vec::with_capacity(len);
        for r in 0..len {
            let mut acc = if r == 0 { CycloNumber::one() } else { CycloNumber::zero() };
            for i in 1..=r.min(4) {
                if !self.coeffs[i].is_zero() {
                    acc = acc.try_sub(&self.coeffs[i].try_mul(&e[r - i])?)?;
                }
            }
            e.push(acc);
        }
        Ok(e)
    }
}

/// Level of the newform underlying `f` for the purposes of `L^imp`: the tame
/// level for crystalline forms, the tame level times the `p`-part for `p`-new ones.
pub fn analytic_level(f: &Eigenform) -> u64 {
    if f.is_crystalline() {
        f.level()
    } else {
        f.level() * f.eps_p().modulus().max(f.p())
    }
}

/// `P_l(f1, f2, X) = (1 - a1 a2 X)(1 - a1 b2 X)(1 - b1 a2 X)(1 - b1 b2 X)`
/// expanded in `A = a_l(f1)`, `B = a_l(f2)`, `C = l^(k1-1) eps1(l)`,
/// `D = l^(k2-1) eps2(l)`:
/// `1 - AB X + (A^2 D + B^2 C - 2CD) X^2 - ABCD X^3 + C^2 D^2 X^4`.
pub fn local_factor(f1: &Eigenform, f2: &Eigenform, l: u64) -> Result<LocalFactor> {
    if analytic_level(f1) % l == 0 || analytic_level(f2) % l == 0 {
        return Err(Error::BadPrime(l));
    }
    let get = |f: &Eigenform| f.a(l).cloned().ok_or_else(|| Error::MissingEigenvalues(vec![l]));
    let a = get(f1)?;
    let b = get(f2)?;
    let c = f1.hecke_constant_at(l);
    let d = f2.hecke_constant_at(l);
    let ab = &a * &b;
    let cd = &c * &d;
    let two = BigRational::from_integer(2.into());
    let c2 = &(&(&a * &a) * &d) + &(&(&b * &b) * &c);
    let c2 = &c2 - &cd.scale(&two);
    Ok(LocalFactor {
        l,
        coeffs: [CycloNumber::one(), -&ab, c2, -&(&ab * &cd), &cd * &cd],
    })
}

/// The series `L^imp(f1, f2, chi, s)` with a cached coefficient table.
pub struct RankinSeries {
    f1: Eigenform,
    f2: Eigenform,
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    bad_modulus: u64,
    table: Mutex<Vec<CycloNumber>>,
}

/// A partial sum together with its tail bound.
#[derive(Debug, Clone)]
pub struct LValue {
    pub s: i64,
    pub n_max: u64,
    pub value: ComplexAP,
    /// Bound on `|sum_{N > n_max} C_N N^-s|`.
    pub tail_bound: f64,
}

impl RankinSeries {
    pub fn new(f1: Eigenform, f2: Eigenform, chi: &DirichletCharacter) -> Self {
        let chi = chi.primitive_part();
        let bad_modulus = analytic_level(&f1) * analytic_level(&f2) * chi.modulus();
        let psi = f1.nebentypus().mul(&f2.nebentypus()).mul(&chi.pow(2));
        RankinSeries { f1, f2, chi, psi, bad_modulus, table: Mutex::new(Vec::new()) }
    }

    pub fn f1(&self) -> &Eigenform {
        &self.f1
    }

    pub fn f2(&self) -> &Eigenform {
        &self.f2
    }

    /// The primitive character `chi`.
    pub fn chi(&self) -> &DirichletCharacter {
        &self.chi
    }

    /// `M = N1 N2 N_chi`.
    pub fn bad_modulus(&self) -> u64 {
        self.bad_modulus
    }

    pub fn is_good(&self, l: u64) -> bool {
        self.bad_modulus % l != 0
    }

    /// `w = (k1 + k2 - 2)/2`, the growth exponent of `C_N`.
    pub fn growth_exponent(&self) -> f64 {
        (self.f1.weight() + self.f2.weight() - 2) as f64 / 2.0
    }

    /// `psi(m) m^(k1 + k2 - 2)`, zero unless `m` is prime to `M`.
    fn auxiliary(&self, m: u64) -> CycloNumber {
        if gcd(m, self.bad_modulus) != 1 {
            return CycloNumber::zero();
        }
        let pw = rational_pow(m as i64, self.f1.weight() + self.f2.weight() - 2);
        self.psi.value(m as i64).scale(&pw)
    }

    /// Whether `f2 = f1 (x) eps1^-1 chi^-1` on the available good primes with
    /// `k1 = k2`, in which case `L^imp` has a pole at `s = k1`.
    pub fn pole_warning(&self) -> Option<String> {
        if self.f1.weight() != self.f2.weight() {
            return None;
        }
        let twist = self.f1.nebentypus().mul(&self.chi).inv();
        let mut checked = 0;
        for (&l, a1) in self.f1.eigenvalues() {
            if !self.is_good(l) {
                continue;
            }
            let Some(a2) = self.f2.a(l) else { continue };
            if &(a1 * &twist.value(l as i64)) != a2 {
                return None;
            }
            checked += 1;
        }
        (checked > 0).then(|| {
            format!(
                "f2 = f1 (x) eps1^-1 chi^-1 on {checked} good primes: L^imp has a simple pole at s = {}",
                self.f1.weight()
            )
        })
    }

    /// `C_1, ..., C_(n_max)` (index 0 is zero) by direct convolution of
    /// `a_n(f1) a_n(f2) chi(n)` with the auxiliary factor.
    pub fn dirichlet_coefficients(&self, n_max: u64) -> Result<Vec<CycloNumber>> {
        let len = n_max as usize + 1;
        let mut cache = self.table.lock().expect("coefficient cache poisoned");
        if cache.len() < len {
            *cache = self.compute_table(len)?;
        }
        Ok(cache[..len].to_vec())
    }

    /// `a_n(f1) a_n(f2) chi(n)` for `n < len`.
    pub fn main_coefficients(&self, len: usize) -> Result<Vec<CycloNumber>> {
        let a1 = self.f1.expand_newform(len)?.into_coeffs();
        let a2 = self.f2.expand_newform(len)?.into_coeffs();
        (0..len)
            .map(|n| {
                let c = self.chi.value(n as i64);
                if n == 0 || c.is_zero() || a1[n].is_zero() || a2[n].is_zero() {
                    return Ok(CycloNumber::zero());
                }
                a1[n].try_mul(&a2[n])?.try_mul(&c)
            })
            .collect()
    }

    fn compute_table(&self, len: usize) -> Result<Vec<CycloNumber>> {
        let mut out = self.main_coefficients(len)?;
        let aux: Vec<CycloNumber> =
            (0..len).take_while(|&m| m * m < len).map(|m| self.auxiliary(m as u64)).collect();
        for n in (1..len).rev() {
            let mut m = 2;
            while m * m <= n {
                if n % (m * m) == 0 && !aux[m].is_zero() && !out[n / (m * m)].is_zero() {
                    let t = aux[m].try_mul(&out[n / (m * m)])?;
                    out[n] = out[n].try_add(&t)?;
                }
                m += 1;
            }
        }
        Ok(out)
    }

    /// The local series `C_(l^0), C_l, C_(l^2), ...` for `l^r <= n_max`: from
    /// `1 / P_l(chi(l) X)` at good `l`, from the definition at bad `l`.
    pub fn local_coefficients(&self, l: u64, n_max: u64) -> Result<Vec<CycloNumber>> {
        let mut len = 1;
        let mut pw = 1u64;
        while pw <= n_max / l {
            pw *= l;
            len += 1;
        }
        let chi_l = self.chi.value(l as i64);
        if self.is_good(l) {
            let e = local_factor(&self.f1, &self.f2, l)?.inverse_series(len)?;
            let mut chi_r = CycloNumber::one();
            let mut out = Vec::with_capacity(len);
            for (r, er) in e.into_iter().enumerate() {
                if r > 0 {
                    chi_r = &chi_r * &chi_l;
                }
                out.push(&er * &chi_r);
            }
            return Ok(out);
        }
        // psi(l) = 0 here, so only the main sum contributes
        let a1 = local_hecke(&self.f1, l, len)?;
        let a2 = local_hecke(&self.f2, l, len)?;
        let mut chi_r = CycloNumber::one();
        let mut out = Vec::with_capacity(len);
        for r in 0..len {
            if r > 0 {
                chi_r = &chi_r * &chi_l;
            }
            out.push(&(&a1[r] * &a2[r]) * &chi_r);
        }
        Ok(out)
    }

    /// `C_1, ..., C_(n_max)` assembled multiplicatively from the local series.
    pub fn euler_coefficients(&self, n_max: u64) -> Result<Vec<CycloNumber>> {
        let len = n_max as usize + 1;
        let spf = smallest_prime_factors(len);
        let mut locals: HashMap<u64, Vec<CycloNumber>> = HashMap::new();
        for l in primes_below(len as u64) {
            locals.insert(l, self.local_coefficients(l, n_max)?);
        }
        let mut out = vec![CycloNumber::zero(); len];
        if len > 1 {
            out[1] = CycloNumber::one();
        }
        for n in 2..len {
            let l = spf[n] as usize;
            let (mut m, mut r) = (n, 0);
            while m % l == 0 {
                m /= l;
                r += 1;
            }
            let local = &locals[&(l as u64)][r];
            out[n] = if m == 1 { local.clone() } else { local.try_mul(&out[m])? };
        }
        Ok(out)
    }

    /// Checks `s > (k1 + k2)/2 + 1`.
    pub fn check_convergence(&self, s: i64) -> Result<()> {
        let k = self.f1.weight() + self.f2.weight();
        if 2 * s <= k + 2 {
            let bound = if k % 2 == 0 { format!("{}", k / 2 + 1) } else { format!("{}.5", k / 2 + 1) };
            return Err(Error::OutsideConvergence { s, bound });
        }
        Ok(())
    }

    /// Bound on the tail `sum_{N > n_max} |C_N| N^-s`.
    pub fn tail_bound(&self, s: i64, n_max: u64) -> Result<f64> {
        self.check_convergence(s)?;
        Ok(tail_bound(self.growth_exponent(), s as f64, n_max as f64))
    }

    /// Partial sum `sum_{N <= n_max} C_N N^-s` at `digits` decimal digits with
    /// its tail bound. With `tolerance`, a larger tail bound is an error.
    pub fn evaluate(&self, s: i64, digits: u32, n_max: u64, tolerance: Option<f64>) -> Result<LValue> {
        let tail = self.tail_bound(s, n_max)?;
        if let Some(tol) = tolerance {
            if tail > tol {
                return Err(Error::TailTooLarge { bound: tail, requested: tol });
            }
        }
        let table = self.dirichlet_coefficients(n_max)?;
        let value = sum_table(&table, s, digits);
        Ok(LValue { s, n_max, value, tail_bound: tail })
    }
}

/// `L^imp(f1, f2, chi, s)` by direct summation to `n_max`.
pub fn evaluate_l(
    series: &RankinSeries,
    s: i64,
    digits: u32,
    n_max: u64,
    tolerance: Option<f64>,
) -> Result<LValue> {
    series.evaluate(s, digits, n_max, tolerance)
}

/// `a_(l^0), ..., a_(l^(len-1))` of the newform underlying `f`: the Hecke
/// recurrence at good `l`, `a_l^r` at `l` dividing the level.
fn local_hecke(f: &Eigenform, l: u64, len: usize) -> Result<Vec<CycloNumber>> {
    let al = f.a(l).cloned().ok_or_else(|| Error::MissingEigenvalues(vec![l]))?;
    let mut out = vec![CycloNumber::one()];
    if analytic_level(f) % l == 0 {
        while out.len() < len {
            let next = out.last().expect("nonempty") * &al;
            out.push(next);
        }
        return Ok(out);
    }
    let c = f.hecke_constant_at(l);
    if len > 1 {
        out.push(al.clone());
    }
    while out.len() < len {
        let r = out.len();
        let next = &(&al * &out[r - 1]) - &(&c * &out[r - 2]);
        out.push(next);
    }
    out.truncate(len);
    Ok(out)
}

/// `sum_N table[N] N^-s` at `digits` decimal digits. Terms are accumulated in
/// index order.
pub fn sum_table(table: &[CycloNumber], s: i64, digits: u32) -> ComplexAP {
    let mut roots: HashMap<u64, Vec<ComplexAP>> = HashMap::new();
    let mut acc = ComplexAP::zero(digits);
    for (n, c) in table.iter().enumerate().skip(1) {
        if c.is_zero() {
            continue;
        }
        let scale = rational_pow(n as i64, -s);
        let term = if let Some(q) = c.to_rational() {
            ComplexAP::from_rational(&(q * scale), digits)
        } else {
            let m = c.modulus();
            let powers = roots.entry(m).or_insert_with(|| {
                (0..m as i64).map(|k| ComplexAP::root_of_unity(k, m, digits)).collect()
            });
            let mut t = ComplexAP::zero(digits);
            for (k, a) in c.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    t = t.add(&powers[k].mul(&ComplexAP::from_rational(&(a * &scale), digits)));
                }
            }
            t
        };
        acc = acc.add(&term);
    }
    acc
}

/// `C_4(eps) = prod_l max_a binom(a + 3, 3) l^(-a eps)`, so that
/// `d_4(N) <= C_4(eps) N^eps`. Primes with `l^eps >= 4` contribute 1.
pub fn divisor_constant(eps: f64) -> f64 {
    let cutoff = 4f64.powf(1.0 / eps).ceil() as u64 + 1;
    let mut log_c = 0.0;
    for l in primes_below(cutoff) {
        let ll = (l as f64).ln() * eps;
        let mut best = 0.0f64;
        let mut a = 1u64;
        loop {
            let v = binomial_f64(a + 3, 3).ln() - a as f64 * ll;
            if v > best {
                best = v;
            } else if a > 3 && v < best - 1.0 {
                break;
            }
            a += 1;
            if a > 10_000 {
                break;
            }
        }
        log_c += best;
    }
    log_c.exp()
}

/// `min_eps C_4(eps) n_max^(w + eps + 1 - s) / (s - w - eps - 1)`, the tail of
/// `sum N^(w - s) d_4(N)` beyond `n_max`.
pub fn tail_bound(w: f64, s: f64, n_max: f64) -> f64 {
    const GRID: [f64; 9] = [0.1, 0.125, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.75];
    GRID.iter()
        .filter(|&&eps| s - w - eps - 1.0 > 0.0)
        .map(|&eps| {
            let a = s - w - eps;
            divisor_constant(eps) * n_max.powf(1.0 - a) / (a - 1.0)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{builtin, DELTA_LABEL, LEVEL11_LABEL};

    fn pair(bound: u64) -> (Eigenform, Eigenform) {
        (
            builtin(DELTA_LABEL, 5, bound).unwrap().unwrap(),
            builtin(LEVEL11_LABEL, 5, bound).unwrap().unwrap(),
        )
    }

    #[test]
    fn local_factor_shapes() {
        let (d, f) = pair(100);
        let p2 = local_factor(&d, &f, 2).unwrap();
        // -a_2(Delta) a_2(f11)
        assert_eq!(p2.coeffs[1], CycloNumber::from_integer(-48));
        assert!(matches!(local_factor(&d, &f, 11), Err(Error::BadPrime(11))));
        // numeric roots
        let digits = 30;
        let roots = |t: &CycloNumber, n: &CycloNumber| {
            let t = t.embed(digits);
            let n = n.embed(digits);
            let four = ComplexAP::from_i64(4, digits);
            let two = ComplexAP::from_i64(2, digits);
            let disc = t.mul(&t).sub(&four.mul(&n)).sqrt();
            (t.add(&disc).div(&two).unwrap(), t.sub(&disc).div(&two).unwrap())
        };
        let (a1, b1) = roots(d.a(2).unwrap(), &d.hecke_constant_at(2));
        let (a2, b2) = roots(f.a(2).unwrap(), &f.hecke_constant_at(2));
        // coefficients of prod (1 - x X)
        let mut poly = vec![ComplexAP::one(digits)];
        for x in [a1.mul(&a2), a1.mul(&b2), b1.mul(&a2), b1.mul(&b2)] {
            let mut next = vec![ComplexAP::zero(digits); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] = next[i].add(c);
                next[i + 1] = next[i + 1].sub(&c.mul(&x));
            }
            poly = next;
        }
        for (i, c) in poly.iter().enumerate() {
            let exact = p2.coeffs[i].embed(digits);
            let scale = exact.abs_f64().max(1.0);
            assert!(c.dist(&exact) / scale < 1e-20, "X^{i}");
        }
    }

    #[test]
    fn zero_traces_factorise() {
        let chi = DirichletCharacter::trivial(1);
        let mut ap = std::collections::BTreeMap::new();
        ap.insert(2, CycloNumber::zero());
        let g = Eigenform::newform("g", 2, 1, 3, chi.clone(), ap.clone()).unwrap();
        let h = Eigenform::newform("h", 4, 1, 3, chi, ap).unwrap();
        let p = local_factor(&g, &h, 2).unwrap();
        // alpha_i = -beta_i, so the four products are +-alpha_1 alpha_2 and
        // P = (1 - CD X^2)^2 with CD = 2 * 8
        let expect = [1, 0, -32, 0, 256].map(CycloNumber::from_integer);
        assert_eq!(p.coeffs, expect);
    }

    #[test]
    fn table_matches_euler_product() {
        let (d, f) = pair(400);
        for chi in [DirichletCharacter::trivial(1), DirichletCharacter::quadratic(3).unwrap()] {
            let series = RankinSeries::new(d.clone(), f.clone(), &chi);
            let raw = series.dirichlet_coefficients(399).unwrap();
            let euler = series.euler_coefficients(399).unwrap();
            assert_eq!(raw, euler);
            assert!(raw[1].is_one());
            let c2 = &(d.a(2).unwrap() * f.a(2).unwrap()) * &chi.value(2);
            assert_eq!(raw[2], c2);
        }
    }

    #[test]
    fn swapping_forms_keeps_the_table() {
        let (d, f) = pair(200);
        let chi = DirichletCharacter::quadratic(3).unwrap();
        let a = RankinSeries::new(d.clone(), f.clone(), &chi).dirichlet_coefficients(199).unwrap();
        let b = RankinSeries::new(f, d, &chi).dirichlet_coefficients(199).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn convergence_region_and_tail() {
        let (d, f) = pair(100);
        let series = RankinSeries::new(d, f, &DirichletCharacter::trivial(1));
        assert!(matches!(series.check_convergence(8), Err(Error::OutsideConvergence { .. })));
        assert!(series.check_convergence(9).is_ok());
        let t = series.tail_bound(10, 100_000).unwrap();
        assert!(t > 0.0 && t < 1e-9, "{t}");
        assert!(series.tail_bound(10, 1000).unwrap() > t);
        assert!(matches!(series.evaluate(10, 20, 50, Some(1e-30)), Err(Error::TailTooLarge { .. })));
        assert!(series.pole_warning().is_none());
    }

    #[test]
    fn divisor_constant_bounds_d4() {
        for eps in [0.25, 0.5] {
            let c = divisor_constant(eps);
            for n in 1..3000u64 {
                let d4: f64 = crate::arith::factorize(n)
                    .iter()
                    .map(|&(_, a)| binomial_f64(a as u64 + 3, 3))
                    .product();
                assert!(d4 <= c * (n as f64).powf(eps) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn pole_detection_for_self_pairs() {
        let f = builtin(LEVEL11_LABEL, 3, 100).unwrap().unwrap();
        let series = RankinSeries::new(f.clone(), f, &DirichletCharacter::trivial(1));
        assert!(series.pole_warning().is_some());
    }

    #[test]
    fn unit_table_sums_to_one() {
        let mut table = vec![CycloNumber::zero(); 50];
        table[1] = CycloNumber::one();
        let v = sum_table(&table, 3, 30);
        assert_eq!(v.re_string(), ComplexAP::one(30).re_string());
        assert!(v.im_f64() == 0.0);
    }
}
