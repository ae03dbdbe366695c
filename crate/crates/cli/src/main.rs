//! `subelliptic` command-line jobs.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
//! 3 numeric failure (with a JSON diagnostic on stderr).

mod args;
mod jobs;
mod output;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use subelliptic::expr::parse_field;
use subelliptic::{Error, ModelKind};

use args::{Cli, Command};
use output::{Format, Outcome};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ModelMismatch(..) => "model_mismatch",
        Error::DepthExceeded { .. } => "depth_exceeded",
        Error::NotPositive => "not_positive",
        Error::InvalidParameter { .. } => "invalid_parameter",
        Error::NonFinite(_) => "non_finite",
        Error::NonPositiveEstimate(_) => "non_positive_estimate",
        Error::StabilityViolated { .. } => "stability_violated",
        Error::BoundaryFlux { .. } => "boundary_flux",
        Error::QuadratureFailed { .. } => "quadrature_failed",
        Error::Singular(_) => "singular",
        Error::ProfileDefect(_) => "profile_defect",
        Error::Divergent(_) => "divergent",
        Error::FitRejected(_) => "fit_rejected",
        Error::NotConverged(_) => "not_converged",
        Error::Parse { .. } => "parse",
    }
}

fn diagnostic(kind: &str, message: &str) -> ExitCode {
    let doc = json!({ "error": kind, "message": message });
    eprintln!("{doc}");
    ExitCode::from(EXIT_NUMERIC)
}

fn usage(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

/// Expressions and point specs are user input, so their errors are usage
/// errors rather than numeric ones.
fn check_inputs(cli: &Cli) -> Result<(), String> {
    let field = |src: &Option<String>, kind: ModelKind| match src {
        Some(s) => parse_field(s, kind).map(|_| ()).map_err(|e| format!("--f `{s}`: {e}")),
        None => Ok(()),
    };
    match &cli.command {
        Command::CheckLiyau(a) => field(&a.f, a.model),
        Command::SpectralGap(a) => field(&a.f, ModelKind::Su2),
        Command::CcDistance(a) => {
            jobs::parse_point(&a.x, a.model)?;
            jobs::parse_point(&a.y, a.model).map(|_| ())
        }
        _ => Ok(()),
    }
}

fn run(cli: &Cli) -> subelliptic::Result<Outcome> {
    match &cli.command {
        Command::VerifyIdentities(a) => jobs::verify_identities(a),
        Command::LiyauCoeffs(a) => jobs::liyau_coeffs(a),
        Command::CheckLiyau(a) => jobs::check_liyau(a),
        Command::OptimizeV(a) => jobs::optimize_v(a),
        Command::SpectralGap(a) => jobs::spectral_gap(a),
        Command::CcDistance(a) => {
            let x = jobs::parse_point(&a.x, a.model).expect("checked before dispatch");
            let y = jobs::parse_point(&a.y, a.model).expect("checked before dispatch");
            jobs::cc_distance_job(a, x, y)
        }
        Command::Diameter(a) => jobs::diameter(a),
        Command::ShortTime(a) => jobs::short_time(a),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> std::io::Result<()> {
    let dest = output::destination(cli.out.as_deref(), cli.command.name(), cli.format);
    output::write_text(dest.as_deref(), &output::render(outcome, cli.format))?;
    if let (true, Some(spec), Some(dest)) = (cli.plot, &outcome.plot, &dest) {
        let csv = outcome.table.to_csv();
        if cli.format == Format::Json {
            output::write_text(Some(&dest.with_extension("csv")), &csv)?;
        }
        let svg = output::svg_from_csv(&csv, spec).map_err(std::io::Error::other)?;
        output::write_text(Some(&dest.with_extension("svg")), &svg)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Err(m) = cli.validate().and_then(|_| check_inputs(&cli)) {
        return usage(&m);
    }
    if cli.plot && output::destination(cli.out.as_deref(), cli.command.name(), cli.format).is_none() {
        return usage(&format!("--plot needs --out or ${}", output::OUT_DIR_ENV));
    }
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return diagnostic("threads", &e.to_string());
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => return diagnostic(error_kind(&e), &e.to_string()),
    };
    if let Err(e) = emit(&cli, &outcome) {
        return diagnostic("io", &e.to_string());
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}
