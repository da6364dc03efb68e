use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyknot_core::certify::DEFAULT_DEPTH;
use polyknot_core::format;
use polyknot_core::oracle::default_grid;
use polyknot_core::scalar::{default_precision, parse_rational, rational_string};
use polyknot_core::{
    certify_knot, contract_trace, distance, embed_linear, project_linear, sampling_oracle, seq_distance,
    trace_linearization, CertifyOptions, Error, MetricTag, OracleOutcome, Rational, Verdict,
};
use serde_json::Value;

mod plot;
mod witness;

pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_CERTIFICATION_FAILED: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_NO_INPUT: u8 = 66;
pub const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(name = "polyknot", version, about = "Certified polynomial knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify that a knot file describes a smooth embedding.
    Verify(VerifyArgs),
    /// Distance between two knots or two sequences.
    Distance(DistanceArgs),
    /// Linear-coefficient sequence of a certified knot.
    Project(IoArgs),
    /// Linear knot `t ↦ (x_1 t, …, x_n t)` of a sequence.
    EmbedLinear(IoArgs),
    /// Trace the linearising homotopy of a certified knot.
    Linearize(TraceArgs),
    /// Trace the contraction of a sequence to the base point.
    Contract(TraceArgs),
    /// Inclusion witness and strictness instance for one comparison.
    Witness(witness::WitnessArgs),
    /// Sample a knot or a trace to CSV or SVG.
    Plot(plot::PlotArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    file: PathBuf,
    /// Also run the grid oracle and report agreement.
    #[arg(long)]
    oracle: bool,
    /// Bisection depth for candidate boxes.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    /// Oracle grid resolution.
    #[arg(long, default_value_t = 201)]
    resolution: usize,
    /// Print the certificate as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    a: PathBuf,
    b: PathBuf,
    /// `inf` or an exponent r >= 1 (`2`, `5/2`, `1.5`).
    #[arg(long, default_value = "inf")]
    metric: String,
}

#[derive(Args, Debug)]
struct IoArgs {
    file: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    file: PathBuf,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlotFormat {
    Csv,
    Svg,
}

/// A command failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Failure { code: EXIT_DATA, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ParameterBoundViolated(_)
            | Error::InvalidExponent(_)
            | Error::BadExponents { .. }
            | Error::OutOfRange(_)
            | Error::Domain(_) => EXIT_USAGE,
            Error::CertificationFailed { .. } => EXIT_CERTIFICATION_FAILED,
            _ => EXIT_DATA,
        };
        Failure { code, message: e.to_string() }
    }
}

pub type CmdResult = Result<u8, Failure>;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_NO_INPUT, message: format!("{}: {e}", path.display()) })
}

pub fn read_json(path: &Path) -> Result<(String, Value), Failure> {
    let text = read_text(path)?;
    let value = serde_json::from_str(&text).map_err(|e| {
        Failure::data(format!("{}: parse error: line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })?;
    Ok((text, value))
}

fn with_path<T>(path: &Path, r: polyknot_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

pub fn load_knot(path: &Path) -> Result<polyknot_core::PolynomialKnot, Failure> {
    with_path(path, format::parse_knot(&read_text(path)?))
}

pub fn load_sequence(path: &Path) -> Result<polyknot_core::SequencePoint, Failure> {
    with_path(path, format::parse_sequence(&read_text(path)?))
}

/// Writes through a sibling temporary file renamed into place on success.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    use std::io::Write;
    let io = |e: std::io::Error| Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn verdict_exit(v: &Verdict) -> u8 {
    match v {
        Verdict::Certified => 0,
        Verdict::Refuted { .. } => EXIT_REFUTED,
        _ => EXIT_INCONCLUSIVE,
    }
}

fn verdict_lines(v: &Verdict) -> String {
    match v {
        Verdict::Refuted { s, t } => format!("verdict: refuted\nwitness: s = {s}, t = {t}\n"),
        Verdict::Inconclusive { depth } => format!("verdict: inconclusive\ndepth: {depth}\n"),
        v => format!("verdict: {}\n", v.tag()),
    }
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let knot = load_knot(&a.file)?;
    let opts = CertifyOptions { depth: a.depth, precision: default_precision() };
    let (knot, cert) = certify_knot(knot, &opts);
    let oracle = if a.oracle { Some(sampling_oracle(&knot, &default_grid(&knot, a.resolution))?) } else { None };
    let contradiction = match (&oracle, knot.verdict()) {
        (Some(OracleOutcome::Refuted { .. }), Verdict::Refuted { .. }) => false,
        (Some(OracleOutcome::Refuted { .. }), _) => true,
        _ => false,
    };
    if a.json {
        let mut doc = format::certificate_json(&cert);
        if let Some(o) = &oracle {
            doc["oracle"] = match o {
                OracleOutcome::NoFailureFound => serde_json::json!({ "outcome": "no-failure-found" }),
                OracleOutcome::Refuted { s, t } => serde_json::json!({
                    "outcome": "refuted", "s": rational_string(s), "t": rational_string(t)
                }),
            };
            doc["agreement"] = Value::Bool(!contradiction);
        }
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        print!("{}", verdict_lines(knot.verdict()));
        println!("evidence: {} items", cert.evidence.len());
        if let Some(o) = &oracle {
            match o {
                OracleOutcome::NoFailureFound => println!("oracle: no failure found"),
                OracleOutcome::Refuted { s, t } => {
                    println!("oracle: failure at s = {}, t = {}", rational_string(s), rational_string(t))
                }
            }
            println!("agreement: {}", if contradiction { "contradiction" } else { "consistent" });
        }
    }
    Ok(verdict_exit(knot.verdict()))
}

fn cmd_distance(a: &DistanceArgs) -> CmdResult {
    let metric = MetricTag::parse(&a.metric).map_err(|e| Failure::usage(format!("--metric: {e}")))?;
    let (ta, va) = read_json(&a.a)?;
    let (tb, vb) = read_json(&a.b)?;
    let seq_a = va.get("entries").is_some();
    let seq_b = vb.get("entries").is_some();
    if seq_a != seq_b {
        return Err(Failure::data("operands live in different spaces: one knot and one sequence"));
    }
    let d = if seq_a {
        let x = with_path(&a.a, format::parse_sequence(&ta))?;
        let y = with_path(&a.b, format::parse_sequence(&tb))?;
        seq_distance(&x, &y, &metric)
    } else {
        let x = with_path(&a.a, format::parse_knot(&ta))?;
        let y = with_path(&a.b, format::parse_knot(&tb))?;
        distance(x.table(), y.table(), &metric)
    };
    println!("{d}");
    Ok(0)
}

/// Certifies `path`, failing with the verdict's exit code unless certified.
fn load_certified(path: &Path) -> Result<polyknot_core::PolynomialKnot, Failure> {
    let (knot, _) = certify_knot(load_knot(path)?, &CertifyOptions::default());
    if !knot.is_certified() {
        return Err(Failure {
            code: verdict_exit(knot.verdict()),
            message: format!("{}: knot is not certified\n{}", path.display(), verdict_lines(knot.verdict()).trim_end()),
        });
    }
    Ok(knot)
}

fn cmd_project(a: &IoArgs) -> CmdResult {
    let knot = load_certified(&a.file)?;
    let x = project_linear(&knot)?;
    emit(a.out.as_deref(), &format::sequence_to_string(&x))?;
    Ok(0)
}

fn cmd_embed(a: &IoArgs) -> CmdResult {
    let x = load_sequence(&a.file)?;
    emit(a.out.as_deref(), &format::knot_to_string(&embed_linear(&x)))?;
    Ok(0)
}

fn cmd_linearize(a: &TraceArgs) -> CmdResult {
    let knot = load_certified(&a.file)?;
    let trace = trace_linearization(&knot, a.steps.unwrap_or(11))?;
    if let Some(bad) = trace.samples.iter().find(|s| !s.verdict.is_certified()) {
        return Err(Error::CertificationFailed { s: rational_string(&bad.parameter) }.into());
    }
    emit(a.out.as_deref(), &format::trace_to_string(&trace))?;
    if let Some(p) = &a.out {
        println!("wrote {} certified samples to {}", trace.samples.len(), p.display());
    }
    Ok(0)
}

fn cmd_contract(a: &TraceArgs) -> CmdResult {
    let x = load_sequence(&a.file)?;
    let trace = contract_trace(&x, a.steps.unwrap_or(21))?;
    emit(a.out.as_deref(), &format::trace_to_string(&trace))?;
    if let Some(p) = &a.out {
        println!("wrote {} samples to {}", trace.samples.len(), p.display());
    }
    Ok(0)
}

pub fn parse_rational_arg(flag: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).ok_or_else(|| Failure::usage(format!("{flag}: cannot read {s:?} as an exact rational")))
}

fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Distance(a) => cmd_distance(a),
        Command::Project(a) => cmd_project(a),
        Command::EmbedLinear(a) => cmd_embed(a),
        Command::Linearize(a) => cmd_linearize(a),
        Command::Contract(a) => cmd_contract(a),
        Command::Witness(a) => witness::run(a),
        Command::Plot(a) => plot::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
