//! `rankin`: q-expansions, identity checks, L-values and interpolation factors.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure.

mod db;
mod qexp;
mod render;
mod verify;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rankin_core::characters::{character_from_json, character_from_label};
use rankin_core::interp::{predict, regime_overlap, LSource};
use rankin_core::{ComplexAP, DirichletCharacter, Eigenform, Error, InterpInput, RankinSeries, RootChoice};
use serde_json::{json, Value};

use crate::db::FormDatabase;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Verification(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) => f.write_str(m),
            Failure::Verification(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

// Errors about the requested parameters are usage errors; the rest concern
// the form data.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidCharacter(_)
            | Error::NonUnit { .. }
            | Error::PrimeMismatch(..)
            | Error::NotCoprime { .. }
            | Error::Precondition(_)
            | Error::OutsideConvergence { .. }
            | Error::TailTooLarge { .. }
            | Error::OutsideRegime(_)
            | Error::ModulusTooLarge { .. }
            | Error::PrecisionUnderflow { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

/// Collected output: one JSON record and one human line per item.
#[derive(Default)]
pub struct Report {
    records: Vec<Value>,
    lines: Vec<String>,
    failures: usize,
}

impl Report {
    pub fn push(&mut self, record: Value, line: String, pass: bool) {
        self.records.push(record);
        self.lines.push(line);
        if !pass {
            self.failures += 1;
        }
    }

    fn print(&self, format: Format) {
        match format {
            Format::Json => {
                for r in &self.records {
                    println!("{r}");
                }
            }
            Format::Pretty => {
                for l in &self.lines {
                    println!("{l}");
                }
            }
        }
    }
}

/// A registry label (`trivial`, `quad<p>`, `char:M:e1,...`) or a JSON character.
pub fn parse_character(s: &str) -> Result<DirichletCharacter, Failure> {
    let s = s.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| Failure::Usage(format!("character JSON: {e}")))?;
        return Ok(character_from_json(&v, 1)?);
    }
    Ok(character_from_label(s, 1)?)
}

/// `alpha`/`beta` (or `+`/`-`) picks the root; `none` leaves the form alone.
pub fn stabilise(f: Eigenform, choice: &str) -> Result<Eigenform, Failure> {
    let choice = match choice {
        "none" => return Ok(f),
        "alpha" | "+" | "plus" => RootChoice::Plus,
        "beta" | "-" | "minus" => RootChoice::Minus,
        other => return Err(Failure::Usage(format!("unknown root choice {other:?} (alpha, beta, none)"))),
    };
    if f.is_stabilised() {
        return Err(Failure::Usage(format!("{} is already p-stabilised", f.label())));
    }
    Ok(f.stabilise_at(choice, false)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Slice,
    Twist,
    Euler,
    All,
}

#[derive(Parser)]
#[command(name = "rankin", version, about = "Exact q-expansions, Eisenstein identities and Rankin-Selberg values")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a q-expansion, e.g. `qexp eisE k=2 N=4 p=3 --prec 3`.
    Qexp {
        /// Kind (eisE, eisF, scriptE, tildeE, form) followed by key=value pairs.
        #[arg(required = true, num_args = 1..)]
        desc: Vec<String>,
        #[arg(long, default_value_t = 20)]
        prec: usize,
    },
    /// Run identity checks.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        k1: Option<String>,
        #[arg(long)]
        k2: Option<String>,
        /// Integer or inclusive range, e.g. 0..5.
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        j: Option<String>,
        #[arg(long)]
        chi: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long = "N")]
        level: Option<u64>,
        #[arg(long)]
        prec: Option<usize>,
        #[arg(long)]
        f1: Option<String>,
        #[arg(long)]
        f2: Option<String>,
        #[arg(long)]
        lmax: Option<u64>,
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// Sum the imprimitive Rankin-Selberg series at s = j.
    Lvalue {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long)]
        j: i64,
        #[arg(long, default_value = "trivial")]
        chi: String,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        #[arg(long, default_value_t = 10_000)]
        nmax: u64,
        /// Fail unless the tail bound is below this.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Predicted interpolation value, factor by factor.
    Interp {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long)]
        j: i64,
        #[arg(long, default_value = "trivial")]
        chi: String,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        /// Use this L-value instead of summing the series.
        #[arg(long, allow_hyphen_values = true)]
        lvalue: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        nmax: u64,
        #[arg(long)]
        p: Option<u64>,
        /// Root used to stabilise f1.
        #[arg(long, default_value = "alpha")]
        stab1: String,
        /// Root used to stabilise f2 (default: leave it unstabilised).
        #[arg(long, default_value = "none")]
        stab2: String,
    },
}

fn single(s: &Option<String>, default: i64, name: &str) -> Result<i64, Failure> {
    match s {
        None => Ok(default),
        Some(s) => s.trim().parse().map_err(|_| Failure::Usage(format!("--{name} expects an integer"))),
    }
}

fn range(s: &Option<String>, default: &str) -> Result<Vec<i64>, Failure> {
    verify::parse_range(s.as_deref().unwrap_or(default))
}

/// The prime a character of `p`-power conductor lives on.
fn char_prime(chi: &DirichletCharacter) -> Option<u64> {
    rankin_core::arith::prime_power(chi.conductor()).map(|(p, _)| p)
}

fn run(cli: Cli, report: &mut Report) -> Result<(), Failure> {
    let db = FormDatabase::from_env();
    match cli.command {
        Command::Qexp { desc, prec } => {
            let parsed = qexp::parse(&desc)?;
            let f = qexp::build(parsed, prec, &db)?;
            let record = json!({
                "series": desc.join(" "),
                "prec": prec,
                "weight": f.weight().map(|w| w.to_string()),
                "level": f.level(),
                "coeffs": render::series(&f),
            });
            let mut lines = vec![format!("{}  (prec {prec})", desc.join(" "))];
            lines.extend(render::series_pretty(&f));
            report.push(record, lines.join("\n"), true);
        }
        Command::Verify { suite, k1, k2, tau, j, chi, p, level, prec, f1, f2, lmax, nmax } => {
            let chi = chi.as_deref().map(parse_character).transpose()?;
            let level = level.unwrap_or(4);
            if matches!(suite, Suite::Slice | Suite::All) {
                let p = p.or_else(|| chi.as_ref().and_then(char_prime)).unwrap_or(3);
                let args = verify::SliceArgs {
                    k1: range(&k1, "12")?,
                    k2: range(&k2, "2")?,
                    tau: range(&tau, "0..5")?,
                    tau_chi: if suite == Suite::Slice { chi.clone() } else { None },
                    p,
                    level,
                    prec: prec.unwrap_or(200),
                };
                verify::slice(&args, report)?;
            }
            if matches!(suite, Suite::Twist | Suite::All) {
                let (a, b) = (single(&k1, 12, "k1")?, single(&k2, 2, "k2")?);
                let chi = match &chi {
                    Some(c) => c.clone(),
                    None => DirichletCharacter::quadratic(3)?,
                };
                let args = verify::TwistArgs {
                    k1: a,
                    k2: b,
                    j: match &j {
                        Some(_) => range(&j, "")?,
                        None => (b..a).collect(),
                    },
                    chi,
                    level,
                    prec: prec.unwrap_or(100),
                };
                verify::twist(&args, report)?;
            }
            if matches!(suite, Suite::Euler | Suite::All) {
                let args = verify::EulerArgs {
                    f1: f1.unwrap_or_else(|| "11.2.a.a".into()),
                    f2: f2.unwrap_or_else(|| "11.2.a.a".into()),
                    chi: match (&chi, suite) {
                        (Some(c), Suite::Euler) => c.clone(),
                        _ => DirichletCharacter::trivial(1),
                    },
                    lmax: lmax.unwrap_or(97),
                    nmax: nmax.unwrap_or(10_000),
                    p,
                };
                verify::euler(&args, &db, report)?;
            }
            let total = report.records.len();
            let failed = report.failures;
            report.records.push(json!({"summary": {"checks": total, "failed": failed}}));
            report.lines.push(format!("{} of {total} checks passed", total - failed));
        }
        Command::Lvalue { f1, f2, j, chi, digits, nmax, tol, p } => {
            let chi = parse_character(&chi)?;
            let f1 = db.get(&f1, p, nmax + 1)?;
            let f2 = db.get(&f2, p, nmax + 1)?;
            let series = RankinSeries::new(f1, f2, &chi);
            let warning = series.pole_warning();
            let v = series.evaluate(j, digits, nmax, tol)?;
            let record = json!({
                "f1": series.f1().label(),
                "f2": series.f2().label(),
                "chi": series.chi().to_string(),
                "s": j,
                "digits": digits,
                "n_max": nmax,
                "convergent": true,
                "value": v.value,
                "tail_bound": v.tail_bound,
                "pole_warning": warning,
            });
            let mut line = format!(
                "L^imp({} x {}, {}, s={j}) = {}  (n_max {nmax}, tail bound {:.3e})",
                series.f1().label(),
                series.f2().label(),
                series.chi(),
                v.value,
                v.tail_bound
            );
            if let Some(w) = warning {
                line.push_str(&format!("\nwarning: {w}"));
            }
            report.push(record, line, true);
        }
        Command::Interp { f1, f2, j, chi, digits, lvalue, nmax, p, stab1, stab2 } => {
            let chi = parse_character(&chi)?;
            let p = match (db::split_label(&f1)?.1, p, char_prime(&chi)) {
                (Some(p), _, _) | (None, Some(p), _) | (None, None, Some(p)) => p,
                _ => return Err(Failure::Usage("trivial chi: give --p or f1@p".into())),
            };
            let bound = if lvalue.is_some() { 60 } else { nmax + 1 }.max(p + 1);
            let mut f1 = db.get(&f1, Some(p), bound)?;
            if !f1.is_stabilised() {
                f1 = stabilise(f1, &stab1)?;
            }
            let f2 = stabilise(db.get(&f2, Some(p), bound)?, &stab2)?;
            let input = InterpInput::new(f1, f2, j, &chi)?;
            let source = match &lvalue {
                Some(s) => LSource::Supplied(ComplexAP::parse_real(s, digits)?),
                None => LSource::Summed { n_max: nmax },
            };
            let pr = predict(&input, digits, &source)?;
            let mut record = pr.to_json(digits);
            record["f1"] = input.f1.label().into();
            record["f2"] = input.f2.label().into();
            record["j"] = j.into();
            record["chi"] = chi.to_string().into();
            record["p"] = p.into();
            let mut lines = vec![
                format!("regime        {}", pr.regime.name()),
                format!("euler_ratio   {}", pr.euler_ratio.numeric(digits)),
                format!("gauss_block   {}", pr.gauss_block.numeric(digits)),
                format!("archimedean   {}", pr.archimedean),
                format!("lvalue        {}", pr.lvalue),
                format!("total         {}", pr.total),
            ];
            let mut pass = true;
            match regime_overlap(&input) {
                Ok((one, two)) => {
                    pass = one == two;
                    record["regime_overlap"] = json!({"pass": pass, "first_route": render::quad(&one), "second_route": render::quad(&two)});
                    lines.push(format!("{} regime overlap: both prefactor routes agree", if pass { "PASS" } else { "FAIL" }));
                }
                Err(Error::Precondition(_)) => {}
                Err(e) => return Err(e.into()),
            }
            report.push(record, lines.join("\n"), pass);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = cli.format;
    let mut report = Report::default();
    let outcome = run(cli, &mut report).and_then(|()| match report.failures {
        0 => Ok(()),
        n => Err(Failure::Verification(n)),
    });
    report.print(format);
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rankin: {f}");
            ExitCode::from(f.code())
        }
    }
}
