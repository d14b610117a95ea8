//! `modheat`: evaluate the hypergeometric family, derive `b₂` and run the
//! identity suites.
//!
//! Exit codes: 0 success, 1 identity failure, 2 usage or domain error,
//! 3 convergence failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod eval;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use modheat::spectral::SpectralRoute;
use modheat::symbol::{self, format::to_real, to_json, to_latex};
use modheat::verify::{self, Axis, Identity, Report};
use serde::Serialize;

use config::{Format, RunConfig};
use eval::{Function, Inputs};

/// A malformed invocation; exits with code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(
    name = "modheat",
    version,
    about = "Hypergeometric spectral functions: evaluation, b2 derivation, identity checks"
)]
struct Cli {
    /// TOML file overriding the built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function.
    Eval(EvalCmd),
    /// Print the b2 term and its sphere integral.
    DeriveB2 {
        #[arg(long, value_enum, default_value = "json")]
        format: B2Format,
    },
    /// Run one identity suite.
    Verify(VerifyCmd),
    /// Run several suites into one report, or re-render a saved report.
    Report(ReportCmd),
}

/// A comma-separated list of numbers.
#[derive(Debug, Clone)]
struct List(Vec<f64>);

fn parse_list(s: &str) -> std::result::Result<List, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<std::result::Result<_, _>>()
        .map(List)
}

#[derive(Args, Debug)]
struct EvalCmd {
    #[arg(value_enum)]
    function: Function,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    a: Option<List>,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    b: Option<List>,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    c: Option<List>,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    z: Option<List>,
    #[arg(long, value_parser = parse_list)]
    alpha: Option<List>,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    s: Option<List>,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    m: Option<List>,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    y: Option<List>,
    #[arg(long, value_parser = parse_list)]
    j: Option<List>,
    /// h_alpha: quadrature | via-fd | reduced | even-m; k_delta, h_delta: h-alpha | hyper | closed.
    #[arg(long)]
    route: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Significant digits in text output.
    #[arg(long, default_value_t = 10)]
    digits: usize,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum B2Format {
    Json,
    Latex,
}

#[derive(Args, Debug, Clone)]
struct SuiteFlags {
    /// Dimensions, comma separated.
    #[arg(long, value_parser = parse_list)]
    m: Option<List>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Grid as min,max,count.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    grid: Option<List>,
    /// Log-spaced grid.
    #[arg(long)]
    log: bool,
    #[arg(long)]
    route: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyCmd {
    identity: String,
    #[command(flatten)]
    flags: SuiteFlags,
}

#[derive(Args, Debug)]
struct ReportCmd {
    /// Identities, comma separated; all when omitted.
    #[arg(long)]
    identities: Option<String>,
    /// Re-render a saved JSON report instead of running suites.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    flags: SuiteFlags,
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("MODHEAT_THREADS") {
        let n: usize =
            v.trim().parse().map_err(|_| UsageError(format!("MODHEAT_THREADS must be a count, got '{v}'")))?;
        if n == 0 {
            return Err(UsageError("MODHEAT_THREADS must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("thread pool")?;
    }
    Ok(())
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            let res = out.write_all(text.as_bytes()).and_then(|_| {
                if text.ends_with('\n') {
                    Ok(())
                } else {
                    out.write_all(b"\n")
                }
            });
            match res {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn format_value(v: f64, digits: usize) -> String {
    if v != 0.0 && (v.abs() >= 1e6 || v.abs() < 1e-4) {
        format!("{v:.digits$e}", digits = digits.saturating_sub(1))
    } else {
        format!("{v:.digits$}")
    }
}

fn cmd_eval(cmd: EvalCmd, cfg: &RunConfig) -> Result<ExitCode> {
    let mut values = BTreeMap::new();
    for (name, v) in [
        ("a", cmd.a),
        ("b", cmd.b),
        ("c", cmd.c),
        ("z", cmd.z),
        ("alpha", cmd.alpha),
        ("s", cmd.s),
        ("m", cmd.m),
        ("y", cmd.y),
        ("j", cmd.j),
    ] {
        if let Some(List(v)) = v {
            values.insert(name, v);
        }
    }
    let e = eval::evaluate(cmd.function, Inputs { values, route: cmd.route }, cfg)?;
    let text = match cmd.format.unwrap_or(cfg.format) {
        Format::Json => serde_json::to_string_pretty(&e)?,
        Format::Csv => format!(
            "function,value,route\n{},{:e},{}",
            serde_json::to_value(e.function)?.as_str().unwrap_or(""),
            e.value,
            e.route
        ),
        Format::Text => {
            let mut s = format!("{}\nroute: {}", format_value(e.value, cmd.digits), e.route);
            for (k, v) in &e.extra {
                s.push_str(&format!("\n{k}: {}", format_value(*v, cmd.digits)));
            }
            s
        }
    };
    emit(&text, None)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct B2Output {
    b2: symbol::PolyJson,
    b2_integrated: symbol::PolyJson,
}

fn cmd_derive_b2(format: B2Format) -> Result<ExitCode> {
    let raw = symbol::resolvent_b(2)?;
    let real = to_real(&raw)?;
    let integrated = symbol::sphere_integrate(&raw)?;
    let text = match format {
        B2Format::Json => {
            serde_json::to_string_pretty(&B2Output { b2: to_json(&real), b2_integrated: to_json(&integrated) })?
        }
        B2Format::Latex => format!(
            "b_2 =\n{}\n\n\\tilde b_2 / \\mathrm{{Vol}}(S^{{m-1}}) =\n{}",
            to_latex(&real),
            to_latex(&integrated)
        ),
    };
    emit(&text, None)?;
    Ok(ExitCode::SUCCESS)
}

fn suite_for(identity: Identity, cfg: &RunConfig, f: &SuiteFlags) -> Result<verify::SuiteConfig> {
    let mut s = cfg.suite(identity);
    if let Some(List(m)) = &f.m {
        s.m_values = m.clone();
    }
    if let Some(n) = f.samples {
        s.samples = n;
    }
    if let Some(seed) = f.seed {
        s.seed = seed;
    }
    if let Some(t) = f.tol {
        s.tolerance = t;
    }
    if let Some(List(g)) = &f.grid {
        let [min, max, count] = g[..] else {
            return Err(UsageError("--grid takes min,max,count".into()).into());
        };
        if !(count >= 1.0 && count.fract() == 0.0) {
            return Err(UsageError(format!("grid count must be a positive integer, got {count}")).into());
        }
        s.y_axis = Axis { min, max, count: count as usize, log: f.log };
    } else if f.log {
        s.y_axis.log = true;
    }
    if let Some(r) = &f.route {
        s.route = r.parse::<SpectralRoute>()?;
    }
    s.validate()?;
    Ok(s)
}

fn render(report: &Report, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => {
            let mut lines: Vec<String> = report.identities.iter().map(|r| r.summary()).collect();
            lines.push(if report.passed { "overall: PASS".into() } else { "overall: FAIL".into() });
            lines.join("\n")
        }
    })
}

fn finish(report: &Report, f: &SuiteFlags, cfg: &RunConfig) -> Result<ExitCode> {
    let format = f.format.unwrap_or(cfg.format);
    emit(&render(report, format)?, f.output.as_deref())?;
    if format != Format::Text || f.output.is_some() {
        for r in &report.identities {
            eprintln!("{}", r.summary());
        }
    }
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_verify(cmd: VerifyCmd, cfg: &RunConfig) -> Result<ExitCode> {
    let identity: Identity = cmd.identity.parse().map_err(|e: modheat::Error| UsageError(e.to_string()))?;
    let suite = suite_for(identity, cfg, &cmd.flags)?;
    let report = Report::new(vec![verify::run(identity, &suite)?]);
    finish(&report, &cmd.flags, cfg)
}

fn cmd_report(cmd: ReportCmd, cfg: &RunConfig) -> Result<ExitCode> {
    if let Some(path) = &cmd.input {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let report = Report::from_json(&text).map_err(|e| UsageError(e.to_string()))?;
        return finish(&report, &cmd.flags, cfg);
    }
    let ids: Vec<Identity> = match &cmd.identities {
        Some(list) => list
            .split(',')
            .map(|s| s.parse::<Identity>())
            .collect::<modheat::Result<_>>()
            .map_err(|e| UsageError(e.to_string()))?,
        None => Identity::ALL.to_vec(),
    };
    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        reports.push(verify::run(id, &suite_for(id, cfg, &cmd.flags)?)?);
    }
    finish(&Report::new(reports), &cmd.flags, cfg)
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    let cfg = RunConfig::load(cli.config.as_deref()).map_err(|e| UsageError(format!("{e:#}")))?;
    match cli.command {
        Command::Eval(cmd) => cmd_eval(cmd, &cfg),
        Command::DeriveB2 { format } => cmd_derive_b2(format),
        Command::Verify(cmd) => cmd_verify(cmd, &cfg),
        Command::Report(cmd) => cmd_report(cmd, &cfg),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<modheat::Error>() {
        Some(modheat::Error::NoConvergence { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
