use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tricyclic::code::{analyze, CodeError, CodeSpec, DEFAULT_ENUM_CAP};
use tricyclic::dual::dual_spec;
use tricyclic::report::{AnalysisJson, DualReportJson, SpecJson};
use tricyclic::ring::{RingContext, RingError};
use tricyclic::sweep::{run_sweep, GSample, SweepConfig, SweepError};

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "tricyclic", version, about = "Triple cyclic codes over Z2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical generators, size, distance and projections of a code.
    Analyze(SpecArgs),
    /// The dual code and every closed-form relation it should satisfy.
    Dual(SpecArgs),
    /// Check every theorem over all small contexts.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SpecArgs {
    /// JSON code spec; `-` reads standard input.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 6)]
    rmax: usize,
    #[arg(long, default_value_t = 6)]
    smax: usize,
    #[arg(long, default_value_t = 6)]
    tmax: usize,
    /// Number of (G1, G2) pairs per divisor triple, or `exhaustive`.
    #[arg(long, default_value_t = GSample::default())]
    gsample: GSample,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    /// Stop at the first failing check.
    #[arg(long)]
    fail_fast: bool,
}

/// A diagnostic and the exit code it maps to.
struct Failure(u8, String);

fn read_spec(path: &Path) -> Result<CodeSpec, Failure> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let json: SpecJson =
        serde_json::from_str(&text).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    if let Err(e @ RingError::TooLong(_)) = RingContext::new(json.r, json.s, json.t) {
        return Err(Failure(EXIT_CAP, e.to_string()));
    }
    json.to_spec()
        .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn code_failure(e: CodeError) -> Failure {
    match e {
        CodeError::CapExceeded { .. } | CodeError::Ring(RingError::TooLong(_)) => Failure(EXIT_CAP, e.to_string()),
        other => Failure(EXIT_FAIL, other.to_string()),
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn cmd_analyze(args: &SpecArgs) -> Result<u8, Failure> {
    let spec = read_spec(&args.spec)?;
    let analysis = analyze(&spec, args.enum_cap).map_err(code_failure)?;
    if analysis.min_distance.is_none() && analysis.body.dimension() > 0 {
        eprintln!("minimum distance skipped: 2^{} codewords exceed the enumeration cap", analysis.body.dimension());
    }
    print_json(&AnalysisJson::new(&analysis));
    Ok(0)
}

fn cmd_dual(args: &SpecArgs) -> Result<u8, Failure> {
    let spec = read_spec(&args.spec)?;
    let analysis = analyze(&spec, args.enum_cap).map_err(code_failure)?;
    if analysis.recovered.is_none() {
        return Err(Failure(
            EXIT_FAIL,
            "the generated code has no generator triple, so the dual formulas do not apply".into(),
        ));
    }
    let report = dual_spec(&analysis.body).map_err(code_failure)?;
    let json = DualReportJson::new(&report);
    for w in &json.witnesses {
        eprintln!("{} fails: {}", w.check, w.detail);
    }
    print_json(&json);
    Ok(if json.witnesses.is_empty() { 0 } else { EXIT_FAIL })
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let cfg = SweepConfig {
        r_max: args.rmax,
        s_max: args.smax,
        t_max: args.tmax,
        g_sample: args.gsample,
        seed: args.seed,
        enum_cap: args.enum_cap,
        fail_fast: args.fail_fast,
    };
    let start = Instant::now();
    let report = run_sweep(&cfg).map_err(|e| match e {
        SweepError::CapExceeded { .. } => Failure(EXIT_CAP, e.to_string()),
        SweepError::EmptyRange { .. } => Failure(EXIT_PARSE, e.to_string()),
    })?;
    // Wall time stays out of the report so that reruns are byte-identical.
    eprintln!(
        "visited {} contexts and {} specs in {:.2?}",
        report.contexts,
        report.specs,
        start.elapsed()
    );
    for (id, tally) in report.tallies.iter().filter(|(_, t)| t.fails > 0) {
        eprintln!("{id}: {} failures", tally.fails);
    }
    print_json(&report);
    Ok(if report.failed() { EXIT_FAIL } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Dual(args) => cmd_dual(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
