//! `hvlab`: batch front end for constructions, classification, counting and
//! verification runs, with JSON reports.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hvlab", version, about = "Rational points on intersections of Hermitian varieties with hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads: a positive integer or `auto`.
    #[arg(long, global = true, env = "HVLAB_THREADS", default_value = "auto")]
    threads: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build an extremal hypersurface and certify its count by enumeration.
    /// edoukou: d non-tangent hyperplanes of P^4 through a plane meeting V3 in
    /// a non-degenerate curve. sorensen: d tangent planes of the Hermitian
    /// surface through a secant line. degenerate: cone over d disjoint secants
    /// against the rank-3 surface. quadric: two hyperplanes of Type I, II or
    /// III (--kind). serre: d hyperplanes of P^m through a common flat of
    /// codimension 2.
    Construct {
        kind: ConstructKind,
        #[command(flatten)]
        p: Params,
    },
    /// Classify a flat's section of the variety, a quadric against V3, or a
    /// plane cubic by its linear factors.
    Classify {
        kind: ClassifyKind,
        #[command(flatten)]
        p: Params,
    },
    /// Count the common rational points of a hypersurface and the Hermitian
    /// variety of the same ambient dimension.
    Count {
        #[command(flatten)]
        p: Params,
    },
    /// Count, decide the structural predicates, and check every bound whose
    /// hypothesis holds.
    Audit {
        #[command(flatten)]
        p: Params,
    },
    /// identities: the counting identities of V3 by enumeration. bounds: every
    /// construction against its closed form, plus a sampling campaign.
    Verify {
        kind: VerifyKind,
        #[command(flatten)]
        p: Params,
    },
    /// Audit seeded random hypersurfaces with uniform coefficients.
    Sample {
        #[command(flatten)]
        p: Params,
    },
}

#[derive(Args, Clone, Serialize)]
struct Params {
    /// The variety lives over F_{q^2}; q in {2, 3, 4, 5, 7, 8, 9}.
    #[arg(long, value_parser = parse_q)]
    q: u32,
    #[arg(long, default_value_t = 3)]
    d: u32,
    /// Ambient projective dimension.
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    /// Input JSON: a polynomial, a flat, or a report holding one.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Quadric type for `construct quadric`.
    #[arg(long = "kind", value_enum, default_value_t = QuadricArg::TypeI)]
    quadric_type: QuadricArg,
    /// Hermitian form in P^3: `standard` (rank 4) or `rank3`.
    #[arg(long, value_enum, default_value_t = FormArg::Standard)]
    form: FormArg,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ConstructKind {
    Edoukou,
    Sorensen,
    Degenerate,
    Quadric,
    Serre,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ClassifyKind {
    Line,
    Plane,
    Hyperplane,
    Quadric,
    PlaneCubic,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum VerifyKind {
    Identities,
    Bounds,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum QuadricArg {
    TypeI,
    TypeIi,
    TypeIii,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FormArg {
    Standard,
    Rank3,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Table,
}

fn parse_q(s: &str) -> Result<u32, String> {
    let q: u32 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if [2, 3, 4, 5, 7, 8, 9].contains(&q) {
        Ok(q)
    } else {
        Err(format!("q must be one of 2, 3, 4, 5, 7, 8, 9, got {q}"))
    }
}

/// Everything needed to rerun a command, minus the thread count.
#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    subcommand: Option<Value>,
    #[serde(flatten)]
    params: &'a Params,
    output: &'a Option<PathBuf>,
    format: Format,
}

/// Command outcome before it is wrapped into a report.
pub struct Outcome {
    pub d: Option<u32>,
    pub mode: &'static str,
    pub identities: Vec<Value>,
    pub bounds: Vec<Value>,
    pub violations: Vec<Value>,
    pub result: Value,
}

pub enum Failure {
    Usage(String),
    Trichotomy(String),
    Certificate(String),
}

impl From<hvlab::Error> for Failure {
    fn from(e: hvlab::Error) -> Failure {
        match e {
            hvlab::Error::TrichotomyViolated(_) => Failure::Trichotomy(e.to_string()),
            hvlab::Error::CertificateMismatch { .. } => Failure::Certificate(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn threads(spec: &str) -> Result<Option<usize>, String> {
    if spec == "auto" {
        return Ok(None);
    }
    match spec.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Some(n)),
        _ => Err(format!("--threads must be a positive integer or `auto`, got `{spec}`")),
    }
}

fn table(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            let s = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k:<14} {s}\n"));
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match threads(&cli.threads) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let (name, sub, p) = match &cli.command {
        Command::Construct { kind, p } => ("construct", Some(json!(kind)), p),
        Command::Classify { kind, p } => ("classify", Some(json!(kind)), p),
        Command::Count { p } => ("count", None, p),
        Command::Audit { p } => ("audit", None, p),
        Command::Verify { kind, p } => ("verify", Some(json!(kind)), p),
        Command::Sample { p } => ("sample", None, p),
    };
    let outcome = match &cli.command {
        Command::Construct { kind, p } => commands::construct(*kind, p),
        Command::Classify { kind, p } => commands::classify(*kind, p),
        Command::Count { p } => commands::count(p),
        Command::Audit { p } => commands::audit(p),
        Command::Verify { kind, p } => commands::verify(*kind, p),
        Command::Sample { p } => commands::sample(p),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Trichotomy(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(3);
        }
        Err(Failure::Certificate(msg)) => {
            eprintln!("violation: {msg}");
            return ExitCode::from(1);
        }
    };
    let config = RunConfig { command: name, subcommand: sub, params: p, output: &cli.out, format: cli.format };
    let report = json!({
        "config": config,
        "q": p.q,
        "d": outcome.d,
        "mode": outcome.mode,
        "identities": outcome.identities,
        "bounds": outcome.bounds,
        "violations": outcome.violations,
        "seed": p.seed,
        "result": outcome.result,
        "elapsed_ms": start.elapsed().as_millis() as u64,
    });
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
        Format::Table => table(&report),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if !outcome.violations.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
