use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Number;

use diophantus::arith::Family;
use diophantus::criteria::{
    character_profile_d34, d34_criterion, decide_d34, decide_gauss64, decide_multinorm_5_34,
    decide_x2_plus_dy2_prime, gauss_method_applicable, GaussMethod, ProfileEntry, RingClassTable,
};
use diophantus::localsolve::{everywhere_locally_solvable, LocalReport};
use diophantus::oracle::{consistency_sweep, split_form_decide, Certificate, Mismatch, OracleChoice, Rejection};
use diophantus::pell::{orbit_enumerate, represent};
use diophantus::{Decision, Error, QuadEquation, Status};

const EXIT_USAGE: u8 = 64;
const EXIT_DEGENERATE: u8 = 65;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "diophantus", version, about = "Integral solvability of binary quadratic and norm equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one equation and print a single record.
    Decide(DecideArgs),
    /// Compare a criterion with its oracle over a range of n.
    Verify(VerifyArgs),
    /// Local character values for x^2 - 34y^2 = n.
    Profile(ProfileArgs),
    /// Per-place local solvability of a general conic.
    Local(LocalArgs),
    /// First solutions of x^2 - d y^2 = n along the unit orbit.
    Witness(WitnessArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DecideFamily {
    Gauss64,
    D34,
    Multinorm534,
    X2dy2prime,
    Negpell,
    Split,
}

impl DecideFamily {
    fn name(self) -> &'static str {
        match self {
            DecideFamily::Gauss64 => "gauss64",
            DecideFamily::D34 => "d34",
            DecideFamily::Multinorm534 => "multinorm534",
            DecideFamily::X2dy2prime => "x2dy2prime",
            DecideFamily::Negpell => "negpell",
            DecideFamily::Split => "split",
        }
    }
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long, value_enum)]
    family: DecideFamily,
    /// Right-hand side; the prime l for x2dy2prime.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
    /// d for x2dy2prime and negpell, k for split.
    #[arg(long)]
    d: Option<u64>,
    /// Ring class table; overrides DIOPHANTUS_TABLE.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Sup-norm bound of the multinorm534 witness search.
    #[arg(long, default_value_t = 12)]
    bound: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFamily {
    Gauss64,
    D34,
    Multinorm534,
}

impl From<SweepFamily> for Family {
    fn from(f: SweepFamily) -> Family {
        match f {
            SweepFamily::Gauss64 => Family::Gauss64,
            SweepFamily::D34 => Family::D34,
            SweepFamily::Multinorm534 => Family::Multinorm534,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Definite,
    Pell,
    Norm,
}

#[derive(Clone, Copy)]
struct Span(i64, i64);

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or("expected a:b")?;
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}"));
        Ok(Span(parse(a)?, parse(b)?))
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    family: SweepFamily,
    /// Inclusive range a:b.
    #[arg(long, allow_hyphen_values = true)]
    range: Span,
    /// Defaults to the family's own oracle.
    #[arg(long, value_enum)]
    oracle: Option<OracleArg>,
    /// Sup-norm bound for the norm oracle.
    #[arg(long, default_value_t = 12)]
    bound: u32,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileFamily {
    D34,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long, value_enum, default_value = "d34")]
    family: ProfileFamily,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
}

#[derive(Clone, Copy)]
struct Coeffs([i64; 6]);

impl FromStr for Coeffs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<_, _>>()?;
        let arr: [i64; 6] = parts
            .try_into()
            .map_err(|v: Vec<i64>| format!("expected 6 coefficients a,b,c,e,f,g, got {}", v.len()))?;
        Ok(Coeffs(arr))
    }
}

#[derive(Args)]
struct LocalArgs {
    /// a,b,c,e,f,g for a x^2 + b xy + c y^2 + e x + f y + g = n.
    #[arg(long, allow_hyphen_values = true)]
    eq: Coeffs,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    d: u64,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    /// Number of orbit elements to print.
    #[arg(long, default_value_t = 5)]
    count: usize,
}

/// Record status: a decision status, or one of the outcomes that only the
/// front end knows about.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
enum Outcome {
    Decided(Status),
    Other(&'static str),
}

const LOCALLY_SOLVABLE: Outcome = Outcome::Other("LocallySolvable");
const INAPPLICABLE: Outcome = Outcome::Other("Inapplicable");
const FAILED: Outcome = Outcome::Other("Error");

impl Outcome {
    fn exit_code(self) -> u8 {
        match self {
            Outcome::Decided(Status::Solvable) | Outcome::Other("LocallySolvable") => 0,
            Outcome::Decided(Status::Unsolvable | Status::LocallyUnsolvable(_)) => 1,
            Outcome::Decided(Status::UnknownWitness) | Outcome::Other("Inapplicable") => 2,
            Outcome::Other(_) => EXIT_ERROR,
        }
    }
}

/// The one record layout shared by decide, profile, local and witness. Every
/// field is always present so that logs from different families line up.
#[derive(Serialize)]
struct Report {
    record: &'static str,
    command: &'static str,
    family: Option<&'static str>,
    n: Option<i64>,
    d: Option<u64>,
    status: Outcome,
    witness: Option<Vec<Number>>,
    certificate: Option<Certificate>,
    local_reports: Option<Vec<LocalReport>>,
    combinable: Option<bool>,
    orbit: Option<Vec<[Number; 2]>>,
    error: Option<String>,
    elapsed_ms: f64,
    argv: Vec<String>,
}

impl Report {
    fn new(command: &'static str, family: Option<&'static str>, n: Option<i64>, d: Option<u64>) -> Self {
        Report {
            record: "report",
            command,
            family,
            n,
            d,
            status: FAILED,
            witness: None,
            certificate: None,
            local_reports: None,
            combinable: None,
            orbit: None,
            error: None,
            elapsed_ms: 0.0,
            argv: std::env::args().collect(),
        }
    }

    fn with_decision(mut self, dec: Decision) -> Self {
        self.status = Outcome::Decided(dec.status);
        self.witness = dec.witness.map(|w| w.iter().map(number).collect());
        self.certificate = dec.certificate;
        self
    }
}

#[derive(Serialize)]
struct PlaceRecord<'a> {
    record: &'static str,
    command: &'static str,
    #[serde(flatten)]
    report: &'a LocalReport,
}

#[derive(Serialize)]
struct EntryRecord<'a> {
    record: &'static str,
    command: &'static str,
    n: i64,
    #[serde(flatten)]
    entry: &'a ProfileEntry,
}

#[derive(Serialize)]
struct VerifyRecord {
    record: &'static str,
    command: &'static str,
    family: Family,
    range: [i64; 2],
    oracle: OracleChoice,
    workers: usize,
    tested: u64,
    agreements: u64,
    mismatches: u64,
    first_mismatch: Option<Mismatch>,
    rejected: Vec<Rejection>,
    elapsed_ms: f64,
    argv: Vec<String>,
}

fn number(v: impl ToString) -> Number {
    Number::from_str(&v.to_string()).expect("integers are valid JSON numbers")
}

fn emit(value: &impl Serialize) {
    println!("{}", serde_json::to_string(value).expect("records serialize"));
}

fn error_exit(e: &Error) -> u8 {
    match e {
        Error::DegenerateDiscriminant { .. } => EXIT_DEGENERATE,
        _ => EXIT_ERROR,
    }
}

/// Errors that mean the procedure does not cover the input rather than that
/// something went wrong.
fn inapplicable(e: &Error) -> bool {
    matches!(e, Error::UnsupportedDiscriminant(_) | Error::SquareInput(_) | Error::IndefiniteForm)
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

/// Print `report`, filled in from `result`, and return its exit code.
fn finish(mut report: Report, result: diophantus::Result<Report>, start: Instant) -> u8 {
    let code = match result {
        Ok(r) => {
            report = r;
            report.status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            report.error = Some(e.to_string());
            if inapplicable(&e) {
                report.status = INAPPLICABLE;
                report.status.exit_code()
            } else {
                report.status = FAILED;
                error_exit(&e)
            }
        }
    };
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    emit(&report);
    code
}

fn attach_local(mut report: Report, eq: diophantus::Result<QuadEquation>) -> diophantus::Result<Report> {
    if let Outcome::Decided(Status::LocallyUnsolvable(_)) = report.status {
        report.local_reports = Some(everywhere_locally_solvable(&eq?)?);
    }
    Ok(report)
}

fn run_decide(args: DecideArgs) -> ExitCode {
    let start = Instant::now();
    let family = args.family;
    let need_n = || args.n.ok_or("--n is required for this family");
    let need_d = || args.d.ok_or("--d is required for this family");
    let (n, d) = match family {
        DecideFamily::Gauss64 | DecideFamily::D34 | DecideFamily::Multinorm534 => match need_n() {
            Ok(n) => (Some(n), None),
            Err(m) => return usage(m),
        },
        DecideFamily::X2dy2prime | DecideFamily::Split => match (need_n(), need_d()) {
            (Ok(n), Ok(d)) => (Some(n), Some(d)),
            (Err(m), _) | (_, Err(m)) => return usage(m),
        },
        DecideFamily::Negpell => match need_d() {
            Ok(d) => (None, Some(d)),
            Err(m) => return usage(m),
        },
    };
    let base = || Report::new("decide", Some(family.name()), n, d);
    let result = (|| -> diophantus::Result<Report> {
        match family {
            DecideFamily::Gauss64 => {
                let n = n.unwrap();
                let r = base().with_decision(decide_gauss64(n)?);
                attach_local(r, Ok(QuadEquation::gauss64(n)))
            }
            DecideFamily::D34 => {
                let n = n.unwrap();
                let r = base().with_decision(decide_d34(n)?);
                attach_local(r, QuadEquation::pell(34, n))
            }
            DecideFamily::Multinorm534 => Ok(base().with_decision(decide_multinorm_5_34(n.unwrap(), Some(args.bound))?)),
            DecideFamily::X2dy2prime => {
                let (l, d) = (n.unwrap(), d.unwrap());
                let l = u64::try_from(l).map_err(|_| Error::NonPositive)?;
                let table = RingClassTable::load(args.table.as_deref())?;
                let r = base().with_decision(decide_x2_plus_dy2_prime(d, l, &table)?);
                let d = i64::try_from(d).map_err(|_| Error::Overflow("d"))?;
                attach_local(r, QuadEquation::new([1, 0, d, 0, 0, 0], l as i64))
            }
            DecideFamily::Split => Ok(base().with_decision(split_form_decide(d.unwrap(), n.unwrap())?)),
            DecideFamily::Negpell => {
                let d = d.unwrap();
                let mut r = base();
                match gauss_method_applicable(d)? {
                    GaussMethod::ViaNegativePell(x, y) => {
                        r.status = Outcome::Decided(Status::Solvable);
                        r.witness = Some(vec![number(x), number(y)]);
                    }
                    GaussMethod::ViaLocalFailure(place) => {
                        r.status = Outcome::Decided(Status::LocallyUnsolvable(place));
                        let eq = QuadEquation::pell(i64::try_from(d).map_err(|_| Error::Overflow("d"))?, -1)?;
                        r.local_reports = Some(everywhere_locally_solvable(&eq)?);
                    }
                    GaussMethod::NotApplicable => r.status = Outcome::Decided(Status::Unsolvable),
                }
                Ok(r)
            }
        }
    })();
    ExitCode::from(finish(base(), result, start))
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    let start = Instant::now();
    let family: Family = args.family.into();
    let oracle = match args.oracle {
        None => match OracleChoice::default_for(family) {
            OracleChoice::NormSearch { .. } => OracleChoice::NormSearch { bound: args.bound },
            o => o,
        },
        Some(OracleArg::Definite) => OracleChoice::DefiniteSearch,
        Some(OracleArg::Pell) => OracleChoice::PellRepresent,
        Some(OracleArg::Norm) => OracleChoice::NormSearch { bound: args.bound },
    };
    let Span(a, b) = args.range;
    match consistency_sweep(family, a..=b, oracle, args.workers) {
        Ok(r) => {
            let code = if r.mismatches == 0 { 0 } else { 1 };
            emit(&VerifyRecord {
                record: "verify",
                command: "verify",
                family,
                range: [a, b],
                oracle,
                workers: args.workers,
                tested: r.tested,
                agreements: r.agreements,
                mismatches: r.mismatches,
                first_mismatch: r.first_mismatch,
                rejected: r.rejected,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                argv: std::env::args().collect(),
            });
            ExitCode::from(code)
        }
        Err(Error::BadInput(m)) => usage(&m),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit(&e))
        }
    }
}

fn run_profile(args: ProfileArgs) -> ExitCode {
    let start = Instant::now();
    let ProfileFamily::D34 = args.family;
    let n = args.n;
    let base = || Report::new("profile", Some("d34"), Some(n), None);
    let result = (|| -> diophantus::Result<Report> {
        let verdict = d34_criterion(n)?;
        let mut r = base().with_decision(verdict);
        match character_profile_d34(n, None) {
            Ok(profile) => {
                for entry in &profile.entries {
                    emit(&EntryRecord { record: "entry", command: "profile", n, entry });
                }
                r.combinable = Some(profile.combinable);
                Ok(r)
            }
            Err(Error::LocallyUnsolvable(_)) => attach_local(r, QuadEquation::pell(34, n)),
            Err(e) => Err(e),
        }
    })();
    ExitCode::from(finish(base(), result, start))
}

fn run_local(args: LocalArgs) -> ExitCode {
    let start = Instant::now();
    let base = || Report::new("local", None, Some(args.n), None);
    let result = (|| -> diophantus::Result<Report> {
        let eq = QuadEquation::new(args.eq.0, args.n)?;
        let reports = everywhere_locally_solvable(&eq)?;
        for report in &reports {
            emit(&PlaceRecord { record: "place", command: "local", report });
        }
        let mut r = base();
        r.status = match reports.iter().find(|r| !r.solvable) {
            Some(bad) => Outcome::Decided(Status::LocallyUnsolvable(bad.place)),
            None => LOCALLY_SOLVABLE,
        };
        Ok(r)
    })();
    ExitCode::from(finish(base(), result, start))
}

fn run_witness(args: WitnessArgs) -> ExitCode {
    let start = Instant::now();
    let base = || Report::new("witness", None, Some(args.n), Some(args.d));
    let result = (|| -> diophantus::Result<Report> {
        let dec = represent(args.d, args.n)?;
        let solvable = dec.is_solvable();
        let mut r = base().with_decision(dec);
        if solvable {
            let orbit = orbit_enumerate(args.d, args.n, args.count)?;
            r.orbit = Some(orbit.into_iter().map(|(x, y)| [number(x), number(y)]).collect());
        }
        Ok(r)
    })();
    ExitCode::from(finish(base(), result, start))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Decide(a) => run_decide(a),
        Command::Verify(a) => run_verify(a),
        Command::Profile(a) => run_profile(a),
        Command::Local(a) => run_local(a),
        Command::Witness(a) => run_witness(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_status() {
        use diophantus::Place;
        assert_eq!(Outcome::Decided(Status::Solvable).exit_code(), 0);
        assert_eq!(Outcome::Decided(Status::Unsolvable).exit_code(), 1);
        assert_eq!(Outcome::Decided(Status::LocallyUnsolvable(Place::Infinity)).exit_code(), 1);
        assert_eq!(Outcome::Decided(Status::UnknownWitness).exit_code(), 2);
        assert_eq!(INAPPLICABLE.exit_code(), 2);
        assert_eq!(LOCALLY_SOLVABLE.exit_code(), 0);
        assert_eq!(FAILED.exit_code(), EXIT_ERROR);
        assert_eq!(error_exit(&Error::DegenerateDiscriminant { p: 3 }), 65);
        assert_eq!(error_exit(&Error::Overflow("x")), EXIT_ERROR);
    }
}
