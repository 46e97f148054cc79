//! Batch front end. Exit codes: 0 success, 1 certificate or property
//! failure, 2 usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::fields::FieldDescriptor;
use crate::forge::{
    build_certificate, check_certificate, choose_centers, interval_search, make_schedule, ForcedDescentModel, ForgeCertificate, IntervalModel,
    Mode, SearchOutcome, SpectralOracle,
};
use crate::gauss::{norm_profile, RadiusInterval};
use crate::models::{annulus_invert, qseries_unbounded_witness, AnnulusElement};
use crate::ratfun::RatFun;
use crate::LogValue;

#[derive(Parser, Debug)]
#[command(name = "ultranorm", version, about = "Exact Gauss norms, Banach-ring models and certified counterexample sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Norm profile of a rational function over a log-radius interval, as CSV.
    Profile(ProfileArgs),
    /// Build a schedule and centers, verify every claim, write the certificate.
    Forge(ForgeArgs),
    /// Re-validate a certificate file.
    Check(CheckArgs),
    /// Run the descent search for a triple (t, gamma, delta).
    Search(SearchArgs),
    /// Witness table (k, j(k)) with |2^-k| = 2^j(k) in the Q-series model.
    Qseries(QseriesArgs),
    /// Invert elements of an annulus field and report residuals.
    Annulus(AnnulusArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Output file, written atomically; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Rational function in t, e.g. "(t-z)/t".
    #[arg(long = "f")]
    f: String,
    #[arg(long, default_value = "genlaurent:3")]
    field: FieldDescriptor,
    /// Log-radius interval "a,b".
    #[arg(long)]
    interval: RadiusInterval,
    /// Add decimal columns for plotting; not authoritative.
    #[arg(long)]
    approx: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ForgeArgs {
    #[arg(long, default_value = "theorem")]
    mode: Mode,
    #[arg(long)]
    depth: usize,
    #[arg(long)]
    field: FieldDescriptor,
    #[arg(long)]
    interval: RadiusInterval,
    /// log2 of the constant c.
    #[arg(long)]
    clog: LogValue,
    /// Smallest multiplicity m to try.
    #[arg(long, default_value_t = 1)]
    m_hint: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CheckArgs {
    certificate: PathBuf,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long = "f", default_value = "t")]
    f: String,
    #[arg(long)]
    field: FieldDescriptor,
    #[arg(long)]
    interval: RadiusInterval,
    #[arg(long)]
    clog: LogValue,
    #[arg(long, default_value_t = 20)]
    max_iter: usize,
    /// Use the forced-failure oracle with this excess over 2 c_log.
    #[arg(long)]
    forced_excess: Option<LogValue>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct QseriesArgs {
    #[arg(long, default_value_t = 100)]
    kmax: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct AnnulusArgs {
    /// Laurent polynomial in T; random elements are drawn when absent.
    #[arg(long)]
    x: Option<String>,
    #[arg(long, default_value = "padic:2")]
    field: FieldDescriptor,
    #[arg(long, default_value = "sqrt2")]
    radius: LogValue,
    #[arg(long, default_value = "5")]
    prec: LogValue,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CertificateFailure(_) | Error::ZeroDivisorAtPrecision | Error::Inconclusive(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parse `args` (including the program name) and run the command.
pub fn dispatch(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Profile(a) => profile(a),
        Command::Forge(a) => forge(a),
        Command::Check(a) => check(a),
        Command::Search(a) => search(a),
        Command::Qseries(a) => qseries(a),
        Command::Annulus(a) => annulus(a),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Check(msg)) => {
            eprintln!("ultranorm: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("ultranorm: {msg}");
            2
        }
    }
}

fn emit(out: &Output, body: &str) -> Outcome {
    match &out.out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
        }
        Some(path) => write_atomic(path, body.as_bytes()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
    }
}

fn write_atomic(path: &Path, body: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body)?;
    tmp.as_file().sync_all()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn json<T: Serialize>(value: &T) -> std::result::Result<String, Failure> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Failure::Usage(e.to_string()))
}

fn profile(a: ProfileArgs) -> Outcome {
    let f = RatFun::parse(&a.f, a.field)?;
    let pr = norm_profile(&f, &a.interval)?;
    let mut csv = String::from("s_a,s_b,value_a,value_b,slope");
    if a.approx {
        csv.push_str(",s_approx,value_approx");
    }
    csv.push('\n');
    for (s, v, slope) in pr.rows() {
        let part = |x: &LogValue| match (x.a(), x.b()) {
            (Some(p), Some(q)) => format!("{p},{q}"),
            _ => "inf,inf".to_string(),
        };
        csv.push_str(&format!("{},{},{slope}", part(&s), part(&v)));
        if a.approx {
            csv.push_str(&format!(",{},{}", s.approx(), v.approx()));
        }
        csv.push('\n');
    }
    emit(&a.output, &csv)
}

fn forge(a: ForgeArgs) -> Outcome {
    let sch = make_schedule(a.field, &a.interval, &a.clog, a.mode, a.depth, a.m_hint)?;
    let centers = choose_centers(&sch)?;
    let cert = build_certificate(&sch, &centers)?;
    emit(&a.output, &(cert.to_json()? + "\n"))?;
    let total = cert.records.len();
    match cert.first_failure() {
        None => {
            eprintln!("forge: {total} records, all pass (m = {})", sch.steps[0].m);
            Ok(())
        }
        Some(r) => Err(Failure::Check(format!(
            "first failing record: n={} zone={} claim={:?} lhs={} rhs={}",
            r.n, r.zone, r.claim, r.lhs, r.rhs
        ))),
    }
}

fn check(a: CheckArgs) -> Outcome {
    let bytes = std::fs::read(&a.certificate).map_err(|e| Failure::Usage(format!("{}: {e}", a.certificate.display())))?;
    // a file that no longer parses counts as a failed check, not a usage error
    let cert: ForgeCertificate = serde_json::from_slice(&bytes).map_err(|e| Failure::Check(format!("unreadable certificate: {e}")))?;
    let report = check_certificate(&cert).map_err(|e| Failure::Check(e.to_string()))?;
    for v in &report.schedule_violations {
        eprintln!("schedule: {v}");
    }
    if report.pass {
        println!("ok: {} records verified", report.records);
        Ok(())
    } else {
        let first = report.first_failure.map(|r| format!("; first failing claim {:?} at n={} ({})", r.claim, r.n, r.zone)).unwrap_or_default();
        Err(Failure::Check(format!("certificate rejected: {} mismatched records{first}", report.mismatches)))
    }
}

fn search(a: SearchArgs) -> Outcome {
    let t0 = RatFun::parse(&a.f, a.field)?;
    let base = IntervalModel { interval: a.interval };
    let oracle: Box<dyn SpectralOracle> = match a.forced_excess {
        Some(excess) => Box::new(ForcedDescentModel { base, excess }),
        None => Box::new(base),
    };
    let trace = interval_search(oracle.as_ref(), &t0, &a.clog, a.max_iter)?;
    emit(&a.output, &json(&trace)?)?;
    if !trace.invariants_hold() {
        return Err(Failure::Check("descent invariants violated".into()));
    }
    if let SearchOutcome::IterationCap = trace.outcome {
        eprintln!("search: no triple after {} iterations", a.max_iter);
    }
    Ok(())
}

fn qseries(a: QseriesArgs) -> Outcome {
    let rows = qseries_unbounded_witness(a.kmax)?;
    emit(&a.output, &json(&rows)?)
}

#[derive(Serialize)]
struct InversionRow {
    x: String,
    dominant_exponent: i64,
    terms: usize,
    residual: LogValue,
    residual_check: LogValue,
    ok: bool,
}

fn random_annulus(rng: &mut ChaCha8Rng, field: FieldDescriptor, s: &LogValue) -> crate::Result<AnnulusElement> {
    let mut x = AnnulusElement::zero(field, s.clone())?;
    for _ in 0..rng.gen_range(1..=4) {
        let n = rng.gen_range(-3..=3);
        let c = field.int(rng.gen_range(1..=40) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let scale = field.uniformizer().pow(rng.gen_range(-2..=3))?;
        x = x.add(&AnnulusElement::monomial(field, s.clone(), n, &c * &scale)?);
    }
    if x.is_zero() {
        x = AnnulusElement::one(field, s.clone())?;
    }
    Ok(x)
}

fn annulus(a: AnnulusArgs) -> Outcome {
    let inputs = match &a.x {
        Some(x) => vec![AnnulusElement::parse(x, a.field, a.radius.clone())?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..a.count).map(|_| random_annulus(&mut rng, a.field, &a.radius)).collect::<crate::Result<Vec<_>>>()?
        }
    };
    let one = AnnulusElement::one(a.field, a.radius.clone())?;
    let mut rows = Vec::new();
    for x in &inputs {
        let inv = annulus_invert(x, &a.prec)?;
        let residual_check = x.mul(&inv.inverse).sub(&one).valuation();
        let ok = residual_check > a.prec && residual_check >= inv.residual;
        rows.push(InversionRow { x: x.to_string(), dominant_exponent: x.dominant().map_or(0, |d| d.0), terms: inv.terms, residual: inv.residual, residual_check, ok });
    }
    emit(&a.output, &json(&rows)?)?;
    if rows.iter().all(|r| r.ok) {
        Ok(())
    } else {
        Err(Failure::Check("an inversion missed the requested precision".into()))
    }
}
