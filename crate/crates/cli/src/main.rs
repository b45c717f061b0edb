//! `renorm`: run registered cases, sweep parameter ladders, dump global
//! solutions and gate on the measured metrics.
//!
//! Exit status is 0 on success, 2 when a `--gate` fails and 1 on any error.

mod dump;
mod gate;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use renorm_core::cases::{solve_case_over, CaseStudy};
use renorm_core::renorm::Closure;
use renorm_core::verify::{
    ladder_csv, report_csv, report_json, verify_case, verify_ladder, LadderReport,
    VerificationReport,
};

use gate::{Gate, Metric};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] renorm_core::Error),
    #[error("io: {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "renorm", version, about = "Global asymptotic solutions of perturbed recurrences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a case, verify it against exact iteration and write the report.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClosureArg {
    Linear,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Case name: illustration, van-der-pol, boundary-layer, reduction,
    /// htr-cubic or htr-domain-wall.
    #[arg(long)]
    case: Option<String>,
    /// JSON case descriptor `{"case": ..., "params": {...}}`.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Expansion order.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    order: u8,
    /// Closure of the renormalization system (van-der-pol only).
    #[arg(long, value_enum)]
    closure: Option<ClosureArg>,
    /// Last sample of the comparison window.
    #[arg(long)]
    window: Option<usize>,
    /// Comma-separated values of the case's primary parameter, or `default`.
    #[arg(long, value_name = "LIST")]
    ladder: Option<String>,
    /// Report format; csv when absent.
    #[arg(long, value_enum)]
    output: Option<Format>,
    /// Destination file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out_path: Option<PathBuf>,
    /// Write the global solution samples and residual scan as JSON instead
    /// of a verification report.
    #[arg(long)]
    dump_solution: bool,
    /// Acceptance gate such as `order>=1.7` or `sup_error<=1e-3`.
    #[arg(long, value_name = "EXPR")]
    gate: Option<String>,
}

/// Case plus overrides, resolved and validated before any computation.
fn resolve_case(args: &RunArgs) -> Result<CaseStudy> {
    let case = match (&args.case, &args.config) {
        (None, None) => return Err(CliError::Usage("one of --case or --config is required".into())),
        (Some(name), None) => CaseStudy::from_name(name)?,
        (named, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let case = CaseStudy::from_json(&text)?;
            if let Some(name) = named {
                CaseStudy::from_name(name)?;
                if name != case.name() {
                    return Err(CliError::Usage(format!(
                        "--case {name} disagrees with config case {}",
                        case.name()
                    )));
                }
            }
            case
        }
    };
    let mut case = case;
    for (name, value) in [
        ("epsilon", args.epsilon),
        ("eta", args.eta),
        ("lambda", args.lambda),
        ("theta", args.theta),
    ] {
        if let Some(v) = value {
            if args.ladder.is_some() && name == case.primary_parameter() {
                return Err(CliError::Usage(format!("--{name} conflicts with --ladder")));
            }
            case = case.with_parameter(name, v)?;
        }
    }
    if let Some(c) = args.closure {
        if !matches!(case, CaseStudy::VanDerPol(_)) {
            return Err(CliError::Usage(format!(
                "--closure applies only to van-der-pol, not {}",
                case.name()
            )));
        }
        case = case.with_closure(match c {
            ClosureArg::Linear => Closure::Linear,
            ClosureArg::Full => Closure::Full,
        });
    }
    case.validate()?;
    Ok(case)
}

fn parse_ladder(spec: &str, case: &CaseStudy) -> Result<Vec<f64>> {
    if spec == "default" {
        return Ok(case.default_ladder());
    }
    let values = spec
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad ladder value {v:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    for &v in &values {
        case.clone().with_primary(v).validate()?;
    }
    Ok(values)
}

/// Writes next to the destination, then renames over it.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("--out-path {} names no file", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err)
}

fn emit(args: &RunArgs, contents: &str) -> Result<()> {
    match &args.out_path {
        Some(p) => write_atomic(p, contents),
        None => io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// What a run measured, for gating.
enum Outcome {
    Single(VerificationReport),
    Ladder(LadderReport),
    Dump { sup_residual: f64 },
}

fn single_metric(r: &VerificationReport, m: Metric) -> Option<f64> {
    match m {
        Metric::SupError => Some(r.sup_error),
        Metric::SupRelError => Some(r.sup_rel_error),
        Metric::SupResidual => Some(r.sup_residual),
        Metric::ManifoldDistance => r.manifold_distance,
        Metric::Order | Metric::ManifoldOrder => None,
    }
}

/// The gated value; ladders gate pointwise metrics on their worst entry.
fn measured(outcome: &Outcome, m: Metric) -> Result<f64> {
    let value = match (outcome, m) {
        (Outcome::Ladder(l), Metric::Order) => l.empirical_order,
        (Outcome::Ladder(l), Metric::ManifoldOrder) => l.manifold_order,
        (Outcome::Ladder(l), _) => l
            .reports
            .iter()
            .map(|r| single_metric(r, m))
            .try_fold(f64::NEG_INFINITY, |acc, v| v.map(|v| acc.max(v))),
        (Outcome::Single(r), _) => single_metric(r, m),
        (Outcome::Dump { sup_residual }, Metric::SupResidual) => Some(*sup_residual),
        (Outcome::Dump { .. }, _) => None,
    };
    value.ok_or_else(|| CliError::Usage(format!("gate metric {} was not measured", m.name())))
}

/// Rejects gates whose metric the requested run cannot produce.
fn check_gate(gate: &Gate, case: &CaseStudy, ladder_len: Option<usize>, dump: bool) -> Result<()> {
    let reason = match gate.metric {
        _ if dump && gate.metric != Metric::SupResidual => Some("a solution dump only measures sup_residual"),
        Metric::Order | Metric::ManifoldOrder if ladder_len.map_or(true, |k| k < 3) => {
            Some("needs --ladder with at least three values")
        }
        Metric::ManifoldOrder | Metric::ManifoldDistance if !matches!(case, CaseStudy::Reduction(_)) => {
            Some("only the reduction case measures a manifold")
        }
        _ => None,
    };
    match reason {
        Some(r) => Err(CliError::Usage(format!("gate metric {}: {r}", gate.metric.name()))),
        None => Ok(()),
    }
}

fn run(args: &RunArgs) -> Result<bool> {
    let case = resolve_case(args)?;
    let gate: Option<Gate> = args.gate.as_deref().map(str::parse).transpose()?;
    let order = args.order as usize;
    let ladder = args.ladder.as_deref().map(|l| parse_ladder(l, &case)).transpose()?;
    if let Some(g) = &gate {
        check_gate(g, &case, ladder.as_ref().map(Vec::len), args.dump_solution)?;
    }
    let outcome = if args.dump_solution {
        if args.ladder.is_some() {
            return Err(CliError::Usage("--dump-solution cannot be combined with --ladder".into()));
        }
        if args.output == Some(Format::Csv) {
            return Err(CliError::Usage("--dump-solution writes JSON only".into()));
        }
        let window = args.window.unwrap_or_else(|| case.window());
        let sol = solve_case_over(&case, order, window + 2)?;
        let doc = dump::solution_dump(&sol, order, window);
        emit(args, &report_json(&doc))?;
        Outcome::Dump {
            sup_residual: doc.residual.sup,
        }
    } else if let Some(values) = &ladder {
        let ladder = verify_ladder(&case, values, order, args.window)?;
        emit(
            args,
            &match args.output.unwrap_or(Format::Csv) {
                Format::Csv => ladder_csv(&ladder),
                Format::Json => report_json(&ladder),
            },
        )?;
        Outcome::Ladder(ladder)
    } else {
        let report = verify_case(&case, order, args.window)?;
        emit(
            args,
            &match args.output.unwrap_or(Format::Csv) {
                Format::Csv => report_csv(&report),
                Format::Json => report_json(&report),
            },
        )?;
        Outcome::Single(report)
    };
    let Some(gate) = gate else {
        return Ok(true);
    };
    let value = measured(&outcome, gate.metric)?;
    let pass = gate.passes(value);
    eprintln!(
        "gate {gate}: {} = {value:?} {}",
        gate.metric.name(),
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Run(args) => match run(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(2),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
