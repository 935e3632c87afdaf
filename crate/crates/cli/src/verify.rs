use rankin_core::characters::Flavor;
use rankin_core::eisenstein::{verify_slice_identity, verify_twist_identity, IdentityCheck};
use rankin_core::lfunc::local_factor;
use rankin_core::{CycloNumber, DirichletCharacter, LocAlgChar, RankinSeries};
use serde_json::{json, Value};

use crate::db::FormDatabase;
use crate::{Failure, Report};

/// `a`, or the inclusive range `a..b`.
pub fn parse_range(s: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::Usage(format!("expected an integer or a range a..b, got {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            Ok((a..=b).collect())
        }
        None => Ok(vec![s.trim().parse().map_err(|_| bad())?]),
    }
}

fn identity_record(report: &mut Report, mut record: Value, check: &IdentityCheck, what: String) {
    let pass = check.holds();
    record["pass"] = pass.into();
    record["prec"] = check.prec.into();
    record["first_mismatch"] = check.first_mismatch.into();
    record["weights_match"] = check.weights_match.into();
    let detail = match (check.first_mismatch, check.weights_match) {
        (None, true) => String::new(),
        (Some(n), _) => format!(" (first mismatch at q^{n})"),
        (None, false) => " (weight-characters differ)".into(),
    };
    report.push(record, format!("{} {what} prec={}{detail}", if pass { "PASS" } else { "FAIL" }, check.prec), pass);
}

pub struct SliceArgs {
    pub k1: Vec<i64>,
    pub k2: Vec<i64>,
    pub tau: Vec<i64>,
    pub tau_chi: Option<DirichletCharacter>,
    pub p: u64,
    pub level: u64,
    pub prec: usize,
}

pub fn slice(args: &SliceArgs, report: &mut Report) -> Result<(), Failure> {
    for &k1 in &args.k1 {
        for &k2 in &args.k2 {
            for &t in &args.tau {
                if k2 < 1 || k2 >= k1 || t < 0 || t > k1 - k2 {
                    continue;
                }
                let tau = match &args.tau_chi {
                    None => LocAlgChar::integer(t, args.p),
                    Some(chi) => LocAlgChar::new(t, chi.primitive_part(), args.p)?,
                };
                let (kappa1, kappa2) = (LocAlgChar::integer(k1, args.p), LocAlgChar::integer(k2, args.p));
                for flavor in [Flavor::Spade, Flavor::Diamond] {
                    let check = verify_slice_identity(flavor, &kappa1, &kappa2, &tau, args.level, args.prec)?;
                    let record = json!({
                        "suite": "slice",
                        "flavor": flavor.name(),
                        "k1": k1, "k2": k2, "tau": tau.to_string(),
                        "p": args.p, "N": args.level,
                    });
                    let what = format!("slice {} k1={k1} k2={k2} tau={tau} p={} N={}", flavor.name(), args.p, args.level);
                    identity_record(report, record, &check, what);
                }
            }
        }
    }
    Ok(())
}

pub struct TwistArgs {
    pub k1: i64,
    pub k2: i64,
    pub j: Vec<i64>,
    pub chi: DirichletCharacter,
    pub level: u64,
    pub prec: usize,
}

pub fn twist(args: &TwistArgs, report: &mut Report) -> Result<(), Failure> {
    for &j in &args.j {
        let check = verify_twist_identity(args.k1, args.k2, j, &args.chi, args.level, args.prec)?;
        let record = json!({
            "suite": "twist",
            "k1": args.k1, "k2": args.k2, "j": j,
            "chi": args.chi.to_string(), "N": args.level,
        });
        let what = format!("twist k1={} k2={} j={j} chi={} N={}", args.k1, args.k2, args.chi, args.level);
        identity_record(report, record, &check, what);
    }
    Ok(())
}

pub struct EulerArgs {
    pub f1: String,
    pub f2: String,
    pub chi: DirichletCharacter,
    pub lmax: u64,
    pub nmax: u64,
    pub p: Option<u64>,
}

/// Convolution table at `l^r` against the expansion of `P_l(chi(l) X)^-1`.
pub fn euler(args: &EulerArgs, db: &FormDatabase, report: &mut Report) -> Result<(), Failure> {
    let bound = args.nmax.max(args.lmax) + 1;
    let f1 = db.get(&args.f1, args.p, bound)?;
    let f2 = db.get(&args.f2, args.p, bound)?;
    let series = RankinSeries::new(f1.clone(), f2.clone(), &args.chi);
    let table = series.dirichlet_coefficients(args.nmax)?;
    for l in rankin_core::arith::primes_below(args.lmax + 1) {
        if !series.is_good(l) || l > args.nmax {
            continue;
        }
        let mut powers = 1usize;
        while l.pow(powers as u32 + 1) <= args.nmax {
            powers += 1;
        }
        let inverse = local_factor(&f1, &f2, l)?.inverse_series(powers + 1)?;
        let chi_l = args.chi.value(l as i64);
        let mut twist = CycloNumber::one();
        let mut mismatch = None;
        for (r, c) in inverse.iter().enumerate() {
            if table[l.pow(r as u32) as usize] != c * &twist {
                mismatch = Some(r);
                break;
            }
            twist = &twist * &chi_l;
        }
        let pass = mismatch.is_none();
        let record = json!({
            "suite": "euler",
            "f1": f1.label(), "f2": f2.label(), "chi": args.chi.to_string(),
            "l": l, "max_power": powers, "pass": pass, "first_mismatch": mismatch,
        });
        let detail = mismatch.map(|r| format!(" (first mismatch at {l}^{r})")).unwrap_or_default();
        let line = format!(
            "{} euler {} x {} chi={} l={l} powers<={powers}{detail}",
            if pass { "PASS" } else { "FAIL" },
            f1.label(),
            f2.label(),
            args.chi
        );
        report.push(record, line, pass);
    }
    Ok(())
}
