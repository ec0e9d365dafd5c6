//! Command-line driver: parses flags, runs one subcommand and writes a
//! versioned JSON report (and optionally CSV rows of residuals).

pub mod commands;
pub mod config;
pub mod error;
pub mod parse;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Serialize;

use elliptica::{EllipticParams, TruncationPolicy, VerificationReport};

pub use config::RunConfig;
pub use error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Serialize)]
struct Report<'a> {
    schema: u32,
    command: &'a str,
    config: &'a RunConfig,
    policy: TruncationPolicy,
    params: Option<EllipticParams>,
    reports: &'a [VerificationReport],
    data: &'a serde_json::Value,
    passed: bool,
}

fn command_name(cfg: &RunConfig) -> &'static str {
    use config::Command::*;
    match cfg.command {
        Theta { .. } => "theta",
        Rmatrix { .. } => "rmatrix",
        Exchange { .. } => "exchange",
        Surface { .. } => "surface",
        Table { .. } => "table",
        Rhsplit { .. } => "rhsplit",
        Classical { .. } => "classical",
        Vo { .. } => "vo",
    }
}

fn policy_for(cfg: &RunConfig) -> Result<TruncationPolicy, CliError> {
    let mut policy = TruncationPolicy::from_env()?;
    if let Some(m) = cfg.common.max_terms {
        policy.max_terms = m;
    }
    if let Some(t) = cfg.common.term_tol {
        policy.term_tol = t;
    }
    policy.validate()?;
    Ok(policy)
}

fn write_csv(path: &std::path::Path, reports: &[VerificationReport]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["check", "sample", "point", "residual"])?;
    for r in reports {
        for (i, res) in r.residuals.iter().enumerate() {
            let point = r
                .sample_points
                .get(i)
                .map(|p| {
                    p.0.iter()
                        .map(|c| format!("{}={}{:+}i", c.name, c.value.re, c.value.im))
                        .collect::<Vec<_>>()
                        .join(";")
                })
                .unwrap_or_default();
            w.write_record([r.check_name.clone(), i.to_string(), point, format!("{res:e}")])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Run with an already parsed configuration; returns the exit code and the
/// JSON text that was written.
pub fn run_config(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(i32, String), CliError> {
    let policy = policy_for(cfg)?;
    let outcome = commands::execute(&cfg.command, cfg.common.seed, &policy)?;
    let passed = outcome.passed();
    let report = Report {
        schema: SCHEMA_VERSION,
        command: command_name(cfg),
        config: cfg,
        policy,
        params: outcome.params,
        reports: &outcome.reports,
        data: &outcome.data,
        passed,
    };
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &cfg.common.output {
        Some(path) => std::fs::write(path, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if let Some(path) = &cfg.common.csv {
        write_csv(path, &outcome.reports)?;
    }
    Ok((if passed { EXIT_PASS } else { EXIT_FAIL }, text))
}

/// Parse `argv` (including the program name) and run. Diagnostics go to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let rendered = e.render().to_string();
            if code == EXIT_PASS {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match run_config(&cfg, stdout) {
        Ok((code, _)) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
