use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use serde_json::Value;

use crate::arith::{divisors, euler_phi, factorize, gcd, lcm};
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};

/// A generator of `(Z/MZ)^x` together with its multiplicative order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Generator {
    pub value: u64,
    pub order: u64,
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1u128 % m128;
    let mut base = b as u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

fn primitive_root_mod_prime(q: u64) -> u64 {
    let phi_factors: Vec<u64> = factorize(q - 1).into_iter().map(|(r, _)| r).collect();
    (2..q)
        .find(|&g| phi_factors.iter().all(|&r| pow_mod(g, (q - 1) / r, q) != 1))
        .unwrap_or(1)
}

/// Canonical generators of `(Z/MZ)^x`: one per odd prime power (a primitive
/// root), `-1` for `4 | M`, and additionally `5` for `8 | M`, each lifted by
/// CRT to be `1` modulo the other prime-power parts.
pub fn generators(m: u64) -> Vec<Generator> {
    let mut out = Vec::new();
    for (q, e) in factorize(m) {
        let qe = q.pow(e);
        let rest = m / qe;
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                return g % qe;
            }
            // x = g mod qe, x = 1 mod rest
            let a = (g as u128) * (rest as u128) % (m as u128) * (inv_mod(rest % qe, qe) as u128);
            let b = (qe as u128) * (inv_mod(qe % rest, rest) as u128);
            ((a + b) % m as u128) as u64
        };
        if q == 2 {
            if e >= 2 {
                out.push(Generator { value: lift(qe - 1), order: 2 });
            }
            if e >= 3 {
                out.push(Generator { value: lift(5), order: qe / 4 });
            }
        } else {
            let mut g = primitive_root_mod_prime(q);
            if e >= 2 && pow_mod(g, q - 1, q * q) == 1 {
                g += q;
            }
            out.push(Generator { value: lift(g), order: euler_phi(qe) });
        }
    }
    out
}

struct Table {
    order: u64,
    // exponent k with chi(a) = zeta_order^k, or None off the unit group
    values: Vec<Option<u32>>,
}

/// A Dirichlet character modulo `M`, stored by the exponents `e_i` with
/// `chi(g_i) = zeta_{n_i}^{e_i}` on the canonical generators `g_i` of order `n_i`.
#[derive(Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    gens: Arc<Vec<Generator>>,
    exps: Vec<u64>,
    table: OnceLock<Arc<Table>>,
    conductor: OnceLock<u64>,
}

impl DirichletCharacter {
    pub fn trivial(m: u64) -> Self {
        let gens = generators(m.max(1));
        let exps = vec![0; gens.len()];
        DirichletCharacter::build(m.max(1), gens, exps)
    }

    fn build(modulus: u64, gens: Vec<Generator>, exps: Vec<u64>) -> Self {
        DirichletCharacter {
            modulus,
            gens: Arc::new(gens),
            exps,
            table: OnceLock::new(),
            conductor: OnceLock::new(),
        }
    }

    /// `chi(g_i) = zeta_{n_i}^{exps[i]}` on the canonical generators.
    pub fn from_generator_exponents(m: u64, exps: &[u64]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidCharacter("modulus must be positive".into()));
        }
        let gens = generators(m);
        if exps.len() != gens.len() {
            return Err(Error::InvalidCharacter(format!(
                "modulus {m} has {} generators, got {} exponents",
                gens.len(),
                exps.len()
            )));
        }
        let exps = exps.iter().zip(gens.iter()).map(|(&e, g)| e % g.order).collect();
        Ok(DirichletCharacter::build(m, gens, exps))
    }

    /// The Legendre symbol modulo an odd prime.
    pub fn quadratic(p: u64) -> Result<Self> {
        if p < 3 || !crate::arith::is_prime(p) {
            return Err(Error::InvalidCharacter(format!("no Legendre symbol modulo {p}")));
        }
        DirichletCharacter::from_generator_exponents(p, &[(p - 1) / 2])
    }

    /// Builds the character modulo `m` whose value at each canonical generator
    /// is `exp(2 pi i * turn)`, `turn = (num, den)`. The value must be an
    /// `n_i`-th root of unity.
    fn from_turns(m: u64, turn: impl Fn(u64) -> Option<(u64, u64)>) -> Result<Self> {
        let gens = generators(m);
        let mut exps = Vec::with_capacity(gens.len());
        for g in gens.iter() {
            let (num, den) = turn(g.value).ok_or_else(|| {
                Error::InvalidCharacter(format!("no value at generator {}", g.value))
            })?;
            if (num * g.order) % den != 0 {
                return Err(Error::InvalidCharacter(format!(
                    "value at {} has order not dividing {}",
                    g.value, g.order
                )));
            }
            exps.push(num * g.order / den % g.order);
        }
        Ok(DirichletCharacter::build(m, gens, exps))
    }

    fn table(&self) -> &Table {
        self.table.get_or_init(|| {
            let m = self.modulus;
            let order = self
                .gens
                .iter()
                .zip(&self.exps)
                .map(|(g, &e)| g.order / gcd(e, g.order))
                .fold(1, lcm);
            let mut values = vec![None; m as usize];
            // enumerate the group as products of generator powers
            let mut elems: Vec<(u64, u64)> = vec![(1 % m, 0)];
            for (g, &e) in self.gens.iter().zip(&self.exps) {
                let step = e * order / g.order % order;
                let mut next = Vec::with_capacity(elems.len() * g.order as usize);
                for &(a, k) in &elems {
                    let mut x = a;
                    let mut kk = k;
                    for _ in 0..g.order {
                        next.push((x, kk));
                        x = ((x as u128 * g.value as u128) % m as u128) as u64;
                        kk = (kk + step) % order;
                    }
                }
                elems = next;
            }
            for (a, k) in elems {
                values[a as usize] = Some(k as u32);
            }
            Arc::new(Table { order, values })
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator_exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn generator_list(&self) -> &[Generator] {
        &self.gens
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        self.table().order
    }

    fn reduce(&self, a: i64) -> usize {
        a.rem_euclid(self.modulus as i64) as usize
    }

    /// `k` with `chi(a) = zeta_order^k`, or `None` when `gcd(a, M) > 1`.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        self.table().values[self.reduce(a)].map(u64::from)
    }

    /// `chi(a)` as a fraction of a full turn, reduced.
    fn turn(&self, a: i64) -> Option<(u64, u64)> {
        let ord = self.order();
        self.exponent(a).map(|k| {
            let g = gcd(k, ord);
            (k / g, ord / g)
        })
    }

    pub fn value(&self, a: i64) -> CycloNumber {
        match self.exponent(a) {
            None => CycloNumber::zero(),
            Some(0) => CycloNumber::one(),
            Some(k) => {
                let ord = self.order();
                if 2 * k == ord {
                    CycloNumber::from_integer(-1)
                } else {
                    CycloNumber::zeta_pow(ord, k as i64)
                }
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// `chi(-1) = 1`.
    pub fn is_even(&self) -> bool {
        self.exponent(-1) == Some(0)
    }

    pub fn parity_sign(&self) -> i64 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    pub fn conductor(&self) -> u64 {
        *self.conductor.get_or_init(|| {
            let m = self.modulus;
            divisors(m)
                .into_iter()
                .find(|&d| {
                    (0..m / d).all(|t| {
                        let a = 1 + d * t;
                        a % m == 1 % m || gcd(a, m) != 1 || self.exponent(a as i64) == Some(0)
                    })
                })
                .unwrap_or(m)
        })
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing this one.
    pub fn primitive_part(&self) -> DirichletCharacter {
        let c = self.conductor();
        if c == self.modulus {
            return self.clone();
        }
        let m = self.modulus;
        DirichletCharacter::from_turns(c, |b| {
            // a unit mod M congruent to b mod c
            let a = (0..m / c).map(|t| b + c * t).find(|&a| gcd(a, m) == 1)?;
            self.turn(a as i64)
        })
        .expect("restriction of a character is a character")
    }

    /// The character modulo a multiple `m` of the modulus.
    pub fn lift(&self, m: u64) -> Result<DirichletCharacter> {
        if m % self.modulus != 0 {
            return Err(Error::InvalidCharacter(format!(
                "cannot lift a character mod {} to modulus {m}",
                self.modulus
            )));
        }
        if m == self.modulus {
            return Ok(self.clone());
        }
        DirichletCharacter::from_turns(m, |a| self.turn(a as i64))
    }

    pub fn mul(&self, other: &DirichletCharacter) -> DirichletCharacter {
        let m = lcm(self.modulus, other.modulus);
        DirichletCharacter::from_turns(m, |a| {
            let (n1, d1) = self.turn(a as i64)?;
            let (n2, d2) = other.turn(a as i64)?;
            let d = lcm(d1, d2);
            let n = (n1 * (d / d1) + n2 * (d / d2)) % d;
            let g = gcd(n, d);
            Some((n / g, d / g))
        })
        .expect("product of characters")
    }

    pub fn inv(&self) -> DirichletCharacter {
        let exps = self
            .exps
            .iter()
            .zip(self.gens.iter())
            .map(|(&e, g)| (g.order - e) % g.order)
            .collect();
        DirichletCharacter::build(self.modulus, (*self.gens).clone(), exps)
    }

    pub fn pow(&self, k: i64) -> DirichletCharacter {
        let exps = self
            .exps
            .iter()
            .zip(self.gens.iter())
            .map(|(&e, g)| {
                let n = g.order as i128;
                ((e as i128 * k as i128).rem_euclid(n)) as u64
            })
            .collect();
        DirichletCharacter::build(self.modulus, (*self.gens).clone(), exps)
    }

    /// `{"modulus": M, "values": [[g, k], ...], "order": n}` meaning
    /// `chi(g) = zeta_n^k` on the canonical generators.
    pub fn to_json(&self) -> Value {
        let ord = self.order();
        let values: Vec<Value> = self
            .gens
            .iter()
            .map(|g| {
                let k = self.exponent(g.value as i64).unwrap_or(0);
                Value::Array(vec![Value::from(g.value), Value::from(k)])
            })
            .collect();
        serde_json::json!({ "modulus": self.modulus, "values": values, "order": ord })
    }

    /// Parses the JSON form. The listed elements may be any generating set of
    /// `(Z/MZ)^x`; the assignment is checked for consistency.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |why: &str| Error::InvalidCharacter(why.to_string());
        let m = v.get("modulus").and_then(Value::as_u64).ok_or_else(|| bad("missing \"modulus\""))?;
        if m == 0 {
            return Err(bad("modulus must be positive"));
        }
        let ord = v.get("order").and_then(Value::as_u64).unwrap_or(1).max(1);
        let pairs = v.get("values").and_then(Value::as_array).ok_or_else(|| bad("missing \"values\""))?;
        let mut assigned: Vec<(u64, u64)> = Vec::new();
        for p in pairs {
            let g = p.get(0).and_then(Value::as_i64).ok_or_else(|| bad("value entries are [g, k]"))?;
            let k = p.get(1).and_then(Value::as_i64).ok_or_else(|| bad("value entries are [g, k]"))?;
            let g = g.rem_euclid(m as i64) as u64;
            if gcd(g, m) != 1 {
                return Err(bad(&format!("{g} is not a unit modulo {m}")));
            }
            assigned.push((g, k.rem_euclid(ord as i64) as u64));
        }
        // breadth-first closure of the listed generators
        let mut turn: Vec<Option<u64>> = vec![None; m as usize];
        turn[(1 % m) as usize] = Some(0);
        let mut frontier = vec![1 % m];
        while let Some(x) = frontier.pop() {
            let kx = turn[x as usize].expect("visited");
            for &(g, k) in &assigned {
                let y = ((x as u128 * g as u128) % m as u128) as u64;
                let ky = (kx + k) % ord;
                match turn[y as usize] {
                    None => {
                        turn[y as usize] = Some(ky);
                        frontier.push(y);
                    }
                    Some(prev) if prev != ky => {
                        return Err(bad("values are not multiplicative"));
                    }
                    Some(_) => {}
                }
            }
        }
        let reached = turn.iter().filter(|t| t.is_some()).count() as u64;
        if reached != euler_phi(m) {
            return Err(bad("listed elements do not generate the unit group"));
        }
        DirichletCharacter::from_turns(m, |a| {
            let k = turn[a as usize]?;
            let g = gcd(k, ord);
            Some((k / g, ord / g))
        })
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.exps == other.exps
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1_{}", self.modulus);
        }
        let exps: Vec<String> = self.exps.iter().map(u64::to_string).collect();
        write!(f, "char:{}:{}", self.modulus, exps.join(","))
    }
}

impl std::hash::Hash for DirichletCharacter {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
        self.exps.hash(state);
    }
}

/// Every character modulo `m`, in lexicographic order of generator exponents.
pub fn all_characters(m: u64) -> Vec<DirichletCharacter> {
    let gens = generators(m);
    let mut tuples: Vec<Vec<u64>> = vec![Vec::new()];
    for g in gens.iter() {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..g.order).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|e| DirichletCharacter::from_generator_exponents(m, &e).expect("valid exponents"))
        .collect()
}

/// Primitive characters of conductor exactly `c`.
pub fn primitive_characters(c: u64) -> Vec<DirichletCharacter> {
    all_characters(c).into_iter().filter(|x| x.is_primitive()).collect()
}
