use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use monores::manifold::MonomialManifold;
use monores::mideal::{principalize, MIdeal, PrincipalizeOptions};
use monores::pipeline::{
    export_star_dot, numeric_oracle, reduce, replay, IdealProblemJson, ProblemJson, TraceJson,
};
use monores::Error;

/// Tolerance of the numeric commuting-diagram check.
const NUMERIC_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "monores", version, about = "Principalize monomial ideals and reduce minimal supports by combinatorial blow-ups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a minimal support to monomial type at every corner.
    Reduce {
        #[command(flatten)]
        run: RunArgs,
        /// Ordinary analytic coordinates of the ambient stratum.
        #[arg(long)]
        stratum_dim: Option<usize>,
    },
    /// Principalize an ideal given by generator exponents at a corner.
    Principalize {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check the structural constraints of a manifold file.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Re-execute a trace and check that it reproduces exactly.
    Replay {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    /// Where to write the trace; printed to stdout when omitted.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
    /// Evaluate all monomial maps in floating point as a cross-check.
    #[arg(long)]
    check_numeric: bool,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

enum Outcome {
    Ok,
    Invalid,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn finish_run(args: &RunArgs, trace: TraceJson, star: &monores::blowup::Star) -> Result<Outcome> {
    let mut outcome = Outcome::Ok;
    let trace = if args.check_numeric {
        let err = numeric_oracle(star, args.samples, args.seed)?;
        eprintln!("numeric check: max relative error {err:e} over {} samples", args.samples);
        if !(err < NUMERIC_TOLERANCE) {
            eprintln!("numeric check failed (tolerance {NUMERIC_TOLERANCE:e})");
            outcome = Outcome::Invalid;
        }
        trace.with_numeric_check(args.samples, args.seed, err)
    } else {
        trace
    };
    let violations = star.end().validate();
    for v in &violations {
        eprintln!("violation: {v}");
    }
    if !violations.is_empty() {
        outcome = Outcome::Invalid;
    }
    eprintln!(
        "age {}, {} final corners",
        trace.report.age,
        trace.final_corners.len()
    );
    let text = trace.to_canonical_string()?;
    match &args.trace {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.dot {
        write(path, &export_star_dot(star))?;
    }
    Ok(outcome)
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Reduce { run, stratum_dim } => {
            let json: ProblemJson = serde_json::from_str(&read(&run.input)?).context("parsing problem")?;
            let problem = json.into_problem(stratum_dim)?;
            let options = PrincipalizeOptions { max_steps: run.max_steps };
            let report = reduce(&problem, &options)?;
            let trace = TraceJson::from_reduction(&report)?;
            finish_run(&run, trace, report.star())
        }
        Command::Principalize { run } => {
            let json: IdealProblemJson = serde_json::from_str(&read(&run.input)?).context("parsing ideal")?;
            let (root, exponents) = json.into_parts()?;
            let root = Arc::new(root);
            let corner = root.corner_ids().next().expect("a corner").clone();
            let ideal = MIdeal::from_corner(&root, &corner, exponents.iter().cloned())?;
            let options = PrincipalizeOptions { max_steps: run.max_steps };
            let result = principalize(Arc::clone(&root), ideal, &options)?;
            let trace = TraceJson::from_principalization(&result, &corner, &exponents, 0)?;
            finish_run(&run, trace, &result.star)
        }
        Command::Validate { input } => {
            let m = MonomialManifold::from_json_str(&read(&input)?)?;
            let violations = m.validate();
            if violations.is_empty() {
                println!("valid: {} corners, {} edges", m.corner_count(), m.edge_count());
                return Ok(Outcome::Ok);
            }
            for v in &violations {
                println!("{v}");
            }
            Ok(Outcome::Invalid)
        }
        Command::Replay { trace, dot } => {
            let trace = TraceJson::from_json_str(&read(&trace)?)?;
            let out = match replay(&trace) {
                Ok(out) => out,
                Err(Error::ReplayMismatch(msg)) => {
                    println!("replay mismatch: {msg}");
                    return Ok(Outcome::Invalid);
                }
                Err(e) => return Err(e.into()),
            };
            let violations = out.star.end().validate();
            for v in &violations {
                println!("violation: {v}");
            }
            if let Some(path) = dot {
                write(&path, &export_star_dot(&out.star))?;
            }
            if !violations.is_empty() {
                return Ok(Outcome::Invalid);
            }
            println!("replayed {} steps, {} final corners", out.star.age(), out.star.end().corner_count());
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Invalid) => ExitCode::from(2),
        Err(e) => {
            if let Some(Error::BudgetExceeded { budget, trace }) = e.downcast_ref::<Error>() {
                eprintln!("error: step budget of {budget} exceeded after {} blow-ups", trace.age());
                return ExitCode::from(3);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
