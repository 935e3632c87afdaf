//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p rankin-core --test acceptance -- --nocapture`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankin_core::arith::primes_below;
use rankin_core::characters::{primitive_characters, Flavor};
use rankin_core::eisenstein::{verify_slice_identity, verify_twist_identity};
use rankin_core::forms::{builtin, DELTA_LABEL, LEVEL11_LABEL};
use rankin_core::interp::{euler_e_pair_roots, regime_overlap, Roots};
use rankin_core::lfunc::{local_factor, sum_table};
use rankin_core::{
    gauss_sum, ComplexAP, CycloNumber, DirichletCharacter, Eigenform, InterpInput, LocAlgChar, QuadNumber,
    RankinSeries, RootChoice,
};

// L^imp(Delta, f11, 1, s = 10) summed to n_max = 10^5. Reproduced by
// tests/oracles/lvalue.py (eta products and mpmath, no code shared with the crate).
const FROZEN_25: &str = "1.044563833133396308550967";
const FROZEN_50: &str = "1.0445638331333963085509670115177753099477482673534";

type Outcome = Result<String, String>;

fn report(id: u32, name: &str, start: Instant, outcome: &Outcome) {
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(msg) => println!("[PASS] {id}. {name}: {msg} ({secs:.1}s)"),
        Err(msg) => println!("[FAIL] {id}. {name}: {msg} ({secs:.1}s)"),
    }
}

fn form(label: &str, p: u64, bound: u64) -> Eigenform {
    builtin(label, p, bound).expect("builtin label").expect("valid form")
}

fn quad3() -> DirichletCharacter {
    DirichletCharacter::quadratic(3).unwrap()
}

fn slice_grid() -> Outcome {
    let (level, prec) = (4, 200);
    let mut checked = 0;
    let mut check = |k1: &LocAlgChar, k2: &LocAlgChar, tau: &LocAlgChar| -> Result<(), String> {
        for flavor in [Flavor::Spade, Flavor::Diamond] {
            let r = verify_slice_identity(flavor, k1, k2, tau, level, prec).map_err(|e| e.to_string())?;
            if !r.holds() {
                return Err(format!("{flavor:?} k1={k1} k2={k2} tau={tau}: {r:?}"));
            }
            checked += 1;
        }
        Ok(())
    };
    let p = 3;
    for k1 in 4..=14i64 {
        for k2 in 1..=k1 - 2 {
            for t in 0..=5.min(k1 - k2) {
                check(&LocAlgChar::integer(k1, p), &LocAlgChar::integer(k2, p), &LocAlgChar::integer(t, p))?;
            }
        }
    }
    for (p, c) in [(3u64, 3u64), (3, 9), (5, 5)] {
        for chi in primitive_characters(c) {
            let fin = |n: i64, x: &DirichletCharacter| LocAlgChar::new(n, x.clone(), p).unwrap();
            let triples = [
                (fin(10, &chi), LocAlgChar::integer(2, p), fin(1, &chi.inv())),
                (LocAlgChar::integer(12, p), fin(2, &chi), LocAlgChar::integer(3, p)),
                (fin(9, &chi), fin(3, &chi), fin(0, &chi)),
                (LocAlgChar::integer(8, p), LocAlgChar::integer(3, p), fin(2, &chi)),
            ];
            for (k1, k2, tau) in &triples {
                check(k1, k2, tau)?;
            }
        }
    }
    Ok(format!("{checked} identities exact to q^{prec}, N = {level}"))
}

fn twist_identities() -> Outcome {
    let prec = 100;
    let mut chars = vec![quad3()];
    chars.extend(primitive_characters(9));
    let mut checked = 0;
    for (k1, k2) in [(12i64, 2i64), (8, 3)] {
        for j in k2..k1 {
            for chi in &chars {
                let r = verify_twist_identity(k1, k2, j, chi, 4, prec).map_err(|e| format!("({k1},{k2},{j}) {chi}: {e}"))?;
                if !r.holds() {
                    return Err(format!("({k1},{k2},{j}) {chi}: {r:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} twist identities exact to q^{prec}"))
}

fn euler_consistency() -> Outcome {
    let n_max = 10_000u64;
    let d = form(DELTA_LABEL, 5, n_max + 1);
    let f = form(LEVEL11_LABEL, 5, n_max + 1);
    let mut checked = 0;
    for (f1, f2) in [(&f, &f), (&d, &f)] {
        for chi in [DirichletCharacter::trivial(1), quad3()] {
            let series = RankinSeries::new(f1.clone(), f2.clone(), &chi);
            let table = series.dirichlet_coefficients(n_max).map_err(|e| e.to_string())?;
            for l in primes_below(98).into_iter().filter(|&l| series.is_good(l)) {
                let mut r = 0u32;
                while l.pow(r + 1) <= n_max {
                    r += 1;
                }
                let inv = local_factor(f1, f2, l)
                    .and_then(|lf| lf.inverse_series(r as usize + 1))
                    .map_err(|e| e.to_string())?;
                let chi_l = chi.value(l as i64);
                let mut twist = CycloNumber::one();
                for (e, c) in inv.iter().enumerate() {
                    let expected = c * &twist;
                    if table[l.pow(e as u32) as usize] != expected {
                        return Err(format!("{} x {}, chi {chi}: C_({l}^{e})", f1.label(), f2.label()));
                    }
                    twist = &twist * &chi_l;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} prime-power coefficients agree exactly"))
}

fn gauss_sums() -> Outcome {
    let digits = 50;
    let mut worst = 0f64;
    let mut checked = 0;
    for c in [3u64, 5, 7, 9, 11, 13, 25, 27] {
        for chi in primitive_characters(c) {
            let g = gauss_sum(&chi);
            let norm = g.embed(digits).norm_sqr();
            let err = norm.dist(&ComplexAP::from_i64(c as i64, digits));
            worst = worst.max(err);
            if err > 1e-40 {
                return Err(format!("|G({chi})|^2 off by {err:e}"));
            }
            let prod = &g * &gauss_sum(&chi.inv());
            if prod != &chi.value(-1) * &CycloNumber::from_integer(c as i64) {
                return Err(format!("G(chi)G(chi^-1) != chi(-1) c for {chi}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} primitive characters, worst |G|^2 error {worst:.1e}"))
}

fn lvalue_dual_route() -> Outcome {
    let (s, n_max) = (10, 100_000u64);
    let d = form(DELTA_LABEL, 5, n_max + 1);
    let f = form(LEVEL11_LABEL, 5, n_max + 1);
    let series = RankinSeries::new(d, f, &DirichletCharacter::trivial(1));
    let mut msg = Vec::new();
    for (digits, frozen) in [(25u32, FROZEN_25), (50, FROZEN_50)] {
        let raw = series.evaluate(s, digits, n_max, None).map_err(|e| e.to_string())?;
        let frozen = ComplexAP::parse_real(frozen, digits).map_err(|e| e.to_string())?;
        let drift = raw.value.dist(&frozen);
        // the frozen string is rounded to its last digit
        let rounding = 10f64.powi(-(digits as i32) + 1);
        if drift > raw.tail_bound.max(rounding) {
            return Err(format!("{digits} digits: {} drifts {drift:e} from the frozen value", raw.value));
        }
        msg.push(format!("{digits}d drift {drift:.1e}"));
        if digits == 25 {
            let euler = series.euler_coefficients(n_max).map_err(|e| e.to_string())?;
            let via_euler = sum_table(&euler, s, digits);
            let gap = via_euler.dist(&raw.value);
            if gap > 1e-8 {
                return Err(format!("raw and Euler sums differ by {gap:e}"));
            }
            msg.push(format!("raw vs Euler {gap:.1e}, tail bound {:.2e}", raw.tail_bound));
        }
    }
    Ok(msg.join(", "))
}

fn regime_consistency() -> Outcome {
    let p = 3;
    let f1 = form(DELTA_LABEL, p, 60).stabilise_at(RootChoice::Minus, true).map_err(|e| e.to_string())?;
    let f2 = form(LEVEL11_LABEL, p, 60).stabilise_at(RootChoice::Plus, true).map_err(|e| e.to_string())?;
    let mut chars = vec![quad3()];
    chars.extend(primitive_characters(9));
    let mut checked = 0;
    for chi in &chars {
        for j in 2..=11 {
            let input = InterpInput::new(f1.clone(), f2.clone(), j, chi).map_err(|e| e.to_string())?;
            let (one, two) = regime_overlap(&input).map_err(|e| e.to_string())?;
            if one != two {
                return Err(format!("chi {chi}, j = {j}: {one} vs {two}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (chi, j) pairs agree exactly"))
}

fn random_root(rng: &mut ChaCha8Rng) -> QuadNumber {
    let num = loop {
        let n = rng.gen_range(-60i64..=60);
        if n != 0 {
            break n;
        }
    };
    let q = CycloNumber::fraction(num, rng.gen_range(1i64..=7));
    match rng.gen_range(0..3) {
        0 => QuadNumber::from_cyclo(q),
        1 => QuadNumber::from_cyclo(&q * &CycloNumber::zeta_pow(4, rng.gen_range(0..4))),
        _ => QuadNumber::new(q, CycloNumber::fraction(rng.gen_range(1i64..=5), 2), CycloNumber::from_integer(rng.gen_range(2i64..=7))),
    }
}

fn vanishing_locus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let trivial = DirichletCharacter::trivial(1);
    let mut forced = [0usize; 4];
    let mut vanished = 0;
    for trial in 0..100 {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let j = rng.gen_range(1i64..=8);
        let pj1 = QuadNumber::from_cyclo(CycloNumber::from_rational(rankin_core::arith::rational_pow(p as i64, j - 1)));
        let pj = QuadNumber::from_cyclo(CycloNumber::from_rational(rankin_core::arith::rational_pow(p as i64, j)));
        let mut roots = Roots {
            alpha1: random_root(&mut rng),
            beta1: random_root(&mut rng),
            alpha2: random_root(&mut rng),
            beta2: random_root(&mut rng),
        };
        // trials 0..80 force one bracket each, cycling; the rest are left free
        if trial < 80 {
            let which = trial % 4;
            forced[which] += 1;
            let div = |n: &QuadNumber, d: &QuadNumber| n.try_div(d).unwrap();
            match which {
                0 => roots.alpha2 = div(&pj1, &roots.alpha1),
                1 => roots.beta2 = div(&pj1, &roots.alpha1),
                2 => roots.alpha2 = div(&pj, &roots.beta1),
                _ => roots.beta2 = div(&pj, &roots.beta1),
            }
        }
        let mul = |a: &QuadNumber, b: &QuadNumber| a.try_mul(b).unwrap();
        let on_locus = mul(&roots.alpha1, &roots.alpha2) == pj1
            || mul(&roots.alpha1, &roots.beta2) == pj1
            || mul(&roots.beta1, &roots.alpha2) == pj
            || mul(&roots.beta1, &roots.beta2) == pj;
        let value = euler_e_pair_roots(&roots, p, j, &trivial).map_err(|e| format!("trial {trial}: {e}"))?;
        if value.is_zero() != on_locus {
            return Err(format!("trial {trial}: p={p} j={j} {roots:?} gives {value}"));
        }
        vanished += value.is_zero() as usize;
    }
    Ok(format!("100 configurations, {vanished} vanish, forced per bracket {forced:?}"))
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, fn() -> Outcome); 7] = [
        (1, "slice identities", slice_grid),
        (2, "twist identity", twist_identities),
        (3, "Euler/Dirichlet consistency", euler_consistency),
        (4, "Gauss sums", gauss_sums),
        (5, "L-value dual route", lvalue_dual_route),
        (6, "interpolation regime consistency", regime_consistency),
        (7, "vanishing locus", vanishing_locus),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        report(id, name, start, &outcome);
        if outcome.is_err() {
            failed.push(id);
        }
    }
    println!(
        "[INFO] 8. end-to-end interpolation theorem: not reproducible here (needs overconvergent projectors \
         and Euler-system inputs); its q-expansion inputs are criteria 1 and 2"
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
