//! Command-line front end. `run` takes the argument list and two sinks so it
//! can be driven from tests; the binary is a thin wrapper around it.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::IntervalTensor;
use crate::interval_class::{
    check_interval_b, check_interval_b_zfast, check_interval_circulant, check_interval_double_b,
    check_interval_double_b_dominance, check_interval_double_b_hat_sufficient, check_interval_double_b_zfast,
    classify_interval_double_b_dichotomy, interval_b_necessary, interval_double_b_necessary, interval_p_sufficient,
    DichotomyResult, IntervalBMethod, NecessaryReport, NecessaryVariant,
};
use crate::io::{parse_input, to_report_json, Input, IntervalFile};
use crate::oracle::{
    equivalence_suite, manufacture_boundary, oracle_interval_b, oracle_interval_double_b, random_interval_tensor,
    GeneratorSpec, Structure, SuiteConfig, DEFAULT_VERTEX_LIMIT,
};
use crate::point::{
    check_b, check_b_circulant, check_dd, check_double_b, check_z, classify_double_b_dichotomy, falsify_p,
    p_sufficient, BMethod, Dichotomy,
};
use crate::report::{summarize_verdict, InputInfo, Report, USAGE_ERROR};
use crate::tensor::Tensor;
use crate::verdict::{Status, Tolerance, Verdict};

const DEFAULT_P_BUDGET: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(name = "itensor", version, about = "Membership tests for structured tensors and interval tensor families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one classifier on a tensor or interval file
    Check(CheckArgs),
    /// Run every applicable classifier and list the statuses
    Classify(ClassifyArgs),
    /// Write a random interval tensor in the interval file format
    Generate(GenerateArgs),
    /// Compare every classifier against the vertex oracle on random instances
    CrossValidate(SuiteArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Slack for strict comparisons, >= 0
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    class: String,
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// falsifier samples, or the vertex cap for oracle methods
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    common: Common,
    input: PathBuf,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    input: PathBuf,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "general")]
    structure: String,
    /// put row 1 exactly on the interval B boundary
    #[arg(long)]
    boundary: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value = "general")]
    structure: String,
    /// vertex cap per instance
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    common: Common,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
/// The report goes to `out` (or `--output`), the human summary to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            USAGE_ERROR
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Check(a) => {
            let tol = Tolerance::new(a.common.epsilon)?;
            let (bytes, input) = load(&a.input)?;
            let mut report = Report::new("check", a.common.epsilon);
            report.input = Some(InputInfo::new(&a.input.display().to_string(), &bytes, &input));
            let report = check(report, &a, input, tol)?;
            emit(&report, &a.common, out, err)?;
            Ok(report.exit_code)
        }
        Command::Classify(a) => {
            let tol = Tolerance::new(a.common.epsilon)?;
            let (bytes, input) = load(&a.input)?;
            let mut report = Report::new("classify", a.common.epsilon);
            report.input = Some(InputInfo::new(&a.input.display().to_string(), &bytes, &input));
            let rows = classify(&input, tol);
            let report = report.with_details(&rows);
            emit(&report, &a.common, out, err)?;
            Ok(0)
        }
        Command::Generate(a) => {
            let structure = parse_structure(&a.structure)?;
            let mut ai = random_interval_tensor(&GeneratorSpec::new(a.m, a.n, structure, a.seed))?;
            if a.boundary {
                ai = manufacture_boundary(&ai)
                    .ok_or_else(|| Error::InvalidArgument("rows have no off-diagonal entries".into()))?;
            }
            let text = to_report_json(&IntervalFile::from(&ai));
            match &a.output {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::CrossValidate(a) => {
            let tol = Tolerance::new(a.common.epsilon)?;
            let mut cfg = SuiteConfig::new(a.m, a.n, a.trials, a.seed).structure(parse_structure(&a.structure)?);
            cfg.tolerance = tol;
            cfg.vertex_limit = a.budget.unwrap_or(DEFAULT_VERTEX_LIMIT);
            GeneratorSpec::new(a.m, a.n, cfg.structure, a.seed).validate()?;
            let suite = equivalence_suite(&cfg)?;
            let mut report = Report::new("cross-validate", a.common.epsilon);
            report.seed = Some(a.seed);
            report.trials = Some(a.trials);
            report.budget = Some(cfg.vertex_limit);
            report.exit_code = if suite.total_violations() == 0 { 0 } else { 1 };
            let mut summary = format!(
                "cross-validate m={} n={} trials={} seed={}: {} violations\n",
                a.m,
                a.n,
                a.trials,
                a.seed,
                suite.total_violations()
            );
            for (name, t) in &suite.properties {
                summary.push_str(&format!("  {name:<26} {}/{}\n", t.agreements, t.checked));
            }
            let p = &suite.probe;
            summary.push_str(&format!(
                "  double B but not B: {} ({} manufactured); B but not double B: {}\n",
                p.double_b_not_b, p.double_b_not_b_manufactured, p.b_not_double_b
            ));
            let report = report.with_details(&suite);
            write_report(&report, &a.common, out)?;
            if a.common.format == Format::Json {
                err.write_all(summary.as_bytes())?;
            } else if a.common.output.is_some() {
                out.write_all(summary.as_bytes())?;
            }
            Ok(report.exit_code)
        }
    }
}

fn parse_structure(s: &str) -> Result<Structure> {
    Structure::parse(s).ok_or_else(|| {
        Error::InvalidArgument(format!("unknown structure {s:?}; expected general, z, circulant or symmetric"))
    })
}

fn load(path: &PathBuf) -> Result<(Vec<u8>, Input)> {
    let bytes = fs::read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let input = parse_input(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok((bytes, input))
}

fn tensor_of(input: Input, class: &str) -> Result<Tensor> {
    match input {
        Input::Tensor(t) => Ok(t),
        Input::Interval(ai) if ai.is_degenerate() => Ok(ai.lower().clone()),
        Input::Interval(_) => Err(Error::InvalidArgument(format!(
            "class {class} needs a tensor file; use interval-{class} for interval families"
        ))),
    }
}

fn interval_of(input: Input) -> IntervalTensor {
    match input {
        Input::Tensor(t) => IntervalTensor::degenerate(t),
        Input::Interval(ai) => ai,
    }
}

fn bad_method(class: &str, method: &str, known: &[&str]) -> Error {
    Error::InvalidArgument(format!(
        "unknown method {method:?} for class {class}; expected one of {}",
        known.join(", ")
    ))
}

/// Necessary conditions never certify membership: passing is inconclusive.
fn necessary_verdict(class: &'static str, method: &'static str, rep: &NecessaryReport) -> Verdict {
    match rep.first_failure() {
        None => Verdict::inconclusive(class, method, "all necessary conditions pass"),
        Some(c) => Verdict {
            status: Status::Fails,
            ..Verdict::inconclusive(class, method, format!("necessary condition {} fails", c.name))
        },
    }
}

fn check(mut report: Report, a: &CheckArgs, input: Input, tol: Tolerance) -> Result<Report> {
    let method = a.method.as_deref();
    let class = a.class.as_str();
    let verdict = match class {
        "b" => {
            let t = tensor_of(input, class)?;
            let m = method.unwrap_or("definition");
            let m = BMethod::parse(m).ok_or_else(|| bad_method(class, m, &["definition", "rowsum_gamma", "slack"]))?;
            check_b(&t, m, tol)
        }
        "double-b" => check_double_b(&tensor_of(input, class)?, tol),
        "z" => check_z(&tensor_of(input, class)?),
        "sdd" => check_dd(&tensor_of(input, class)?, true, tol),
        "circulant-b" => check_b_circulant(&tensor_of(input, class)?, tol)?,
        "p-sufficient" => p_sufficient(&tensor_of(input, class)?, tol),
        "p-falsify" => {
            let t = tensor_of(input, class)?;
            let budget = a.budget.unwrap_or(DEFAULT_P_BUDGET);
            let seed = a.seed.unwrap_or(0);
            report.seed = Some(seed);
            report.budget = Some(budget);
            let r = falsify_p(&t, budget, seed);
            let v = if r.falsified {
                Verdict {
                    status: Status::Fails,
                    ..Verdict::inconclusive("p-falsify", "sampling", format!("not a P tensor: counterexample after {} samples", r.samples_used))
                }
            } else {
                Verdict::inconclusive("p-falsify", "sampling", format!("no counterexample in {} samples", r.samples_used))
            };
            report = report.with_details(&r);
            v
        }
        "interval-b" => {
            let ai = interval_of(input);
            match method.unwrap_or("theorem") {
                "z_rowsum" => check_interval_b_zfast(&ai, tol)?,
                "oracle" => {
                    let limit = a.budget.unwrap_or(DEFAULT_VERTEX_LIMIT);
                    report.budget = Some(limit);
                    oracle_interval_b(&ai, limit, tol)?.verdict
                }
                "necessary" => {
                    let rep = interval_b_necessary(&ai, tol);
                    report = report.with_details(&rep);
                    necessary_verdict("interval-b", "necessary", &rep)
                }
                m => {
                    let mm = IntervalBMethod::parse(m).ok_or_else(|| {
                        bad_method(class, m, &["theorem", "compact", "slack", "pairwise", "z_rowsum", "oracle", "necessary"])
                    })?;
                    check_interval_b(&ai, mm, tol)
                }
            }
        }
        "interval-double-b" => {
            let ai = interval_of(input);
            match method.unwrap_or("theorem") {
                "theorem" => check_interval_double_b(&ai, tol),
                "dominance" => check_interval_double_b_dominance(&ai, tol),
                "z_lower" => check_interval_double_b_zfast(&ai, tol)?,
                "hat" => check_interval_double_b_hat_sufficient(&ai, tol),
                "oracle" => {
                    let limit = a.budget.unwrap_or(DEFAULT_VERTEX_LIMIT);
                    report.budget = Some(limit);
                    oracle_interval_double_b(&ai, limit, tol)?.verdict
                }
                m @ ("necessary_extremes" | "necessary_rowmax") => {
                    let (variant, name) = if m == "necessary_extremes" {
                        (NecessaryVariant::Extremes, "necessary_extremes")
                    } else {
                        (NecessaryVariant::Rowmax, "necessary_rowmax")
                    };
                    let rep = interval_double_b_necessary(&ai, variant, tol);
                    report = report.with_details(&rep);
                    necessary_verdict("interval-double-b", name, &rep)
                }
                m => {
                    return Err(bad_method(
                        class,
                        m,
                        &["theorem", "dominance", "z_lower", "hat", "oracle", "necessary_extremes", "necessary_rowmax"],
                    ))
                }
            }
        }
        "interval-z" => {
            let ai = interval_of(input);
            Verdict {
                class: "interval-z",
                method: "upper_offdiagonal",
                ..check_z(ai.upper())
            }
        }
        "interval-circulant" => check_interval_circulant(&interval_of(input), tol)?,
        "interval-p-sufficient" => interval_p_sufficient(&interval_of(input), tol),
        "dichotomy" => match input {
            Input::Tensor(t) => {
                let d = classify_double_b_dichotomy(&t, tol);
                report = report.with_details(&d);
                dichotomy_verdict(d.to_string(), matches!(d, Dichotomy::NotDoubleB), matches!(d, Dichotomy::Anomaly { .. }))
            }
            Input::Interval(ai) => {
                let d = classify_interval_double_b_dichotomy(&ai, tol);
                report = report.with_details(&d);
                dichotomy_verdict(
                    d.to_string(),
                    matches!(d, DichotomyResult::NotDoubleB),
                    matches!(d, DichotomyResult::Anomaly { .. }),
                )
            }
        },
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown class {other:?}; expected one of {}",
                CLASSES.join(", ")
            )))
        }
    };
    Ok(report.with_verdict(verdict))
}

pub const CLASSES: [&str; 13] = [
    "b",
    "double-b",
    "z",
    "sdd",
    "circulant-b",
    "p-sufficient",
    "p-falsify",
    "interval-b",
    "interval-double-b",
    "interval-z",
    "interval-circulant",
    "interval-p-sufficient",
    "dichotomy",
];

/// Holds for double B inputs (either branch), fails otherwise.
fn dichotomy_verdict(text: String, not_double_b: bool, anomaly: bool) -> Verdict {
    let status = if anomaly {
        Status::Inconclusive
    } else if not_double_b {
        Status::Fails
    } else {
        Status::Holds
    };
    Verdict {
        status,
        ..Verdict::inconclusive("dichotomy", "critical_row", text)
    }
}

#[derive(Serialize)]
struct ClassifyRow {
    class: &'static str,
    method: &'static str,
    status: Status,
}

fn classify(input: &Input, tol: Tolerance) -> Vec<ClassifyRow> {
    let mut verdicts: Vec<Verdict> = Vec::new();
    match input {
        Input::Tensor(t) => {
            verdicts.push(check_b(t, BMethod::Definition, tol));
            verdicts.push(check_double_b(t, tol));
            verdicts.push(check_z(t));
            verdicts.push(check_dd(t, true, tol));
            if let Ok(v) = check_b_circulant(t, tol) {
                verdicts.push(v);
            }
            verdicts.push(p_sufficient(t, tol));
        }
        Input::Interval(ai) => {
            verdicts.push(check_interval_b(ai, IntervalBMethod::Theorem, tol));
            verdicts.push(check_interval_double_b(ai, tol));
            verdicts.push(Verdict {
                class: "interval-z",
                method: "upper_offdiagonal",
                ..check_z(ai.upper())
            });
            if let Ok(v) = check_interval_circulant(ai, tol) {
                verdicts.push(v);
            }
            verdicts.push(interval_p_sufficient(ai, tol));
        }
    }
    verdicts
        .into_iter()
        .map(|v| ClassifyRow {
            class: v.class,
            method: v.method,
            status: v.status,
        })
        .collect()
}

fn write_report(report: &Report, common: &Common, out: &mut dyn Write) -> Result<()> {
    let json = report.to_json();
    match &common.output {
        Some(p) => fs::write(p, json)?,
        None if common.format == Format::Json => out.write_all(json.as_bytes())?,
        None => {}
    }
    Ok(())
}

fn emit(report: &Report, common: &Common, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    write_report(report, common, out)?;
    let mut summary = String::new();
    if let Some(v) = &report.verdict {
        summary.push_str(&summarize_verdict(v, common.format == Format::Text));
    }
    if let (Some(details), "classify") = (&report.details, report.command) {
        if let Some(rows) = details.as_array() {
            for r in rows {
                summary.push_str(&format!(
                    "{} [{}]: {}\n",
                    r["class"].as_str().unwrap_or("?"),
                    r["method"].as_str().unwrap_or("?"),
                    r["status"].as_str().unwrap_or("?")
                ));
            }
        }
    }
    if common.format == Format::Text && common.output.is_none() {
        out.write_all(summary.as_bytes())?;
    } else {
        err.write_all(summary.as_bytes())?;
    }
    Ok(())
}
