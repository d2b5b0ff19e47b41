//! Argument handling and subcommand dispatch.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use zfrt_core::{commutator, load_spec, nf, record_timings, CatalogSpec, DresserMode, ExprContext, VerificationReport};

use crate::emit::{emit_report, parse_report, Format};
use crate::error::{CliError, Result};
use crate::expr::{from_poly, lower, parse_expr};
use crate::suite::{parse_targets, run_suite, SuiteOptions, Target};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "zfrt", version, about = "Exact verification of bulk and defect scattering algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Output format: json or markdown.
    #[arg(long, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Record per-check wall-clock times (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Numeric residual checks of the S-matrix and the defect pair.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Runs verification targets; `all` selects every target.
    Verify {
        targets: Vec<String>,
        #[arg(long)]
        config: PathBuf,
        /// Hierarchy orders, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0u32, 1, 2, 3])]
        orders: Vec<u32>,
        /// Run targets one after another.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Prints the normal form of an expression.
    Nf {
        expr: String,
        #[arg(long)]
        config: PathBuf,
        /// Keep t and r as atomic letters.
        #[arg(long)]
        opaque_dressers: bool,
    },
    /// Prints the normal form of `e1·e2 − e2·e1`.
    Commute {
        first: String,
        second: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        opaque_dressers: bool,
    },
    /// Re-emits a JSON report (from a file or stdin) in the chosen format.
    Report {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn read_spec(path: &Path) -> Result<CatalogSpec> {
    Ok(load_spec(&read_file(path)?)?)
}

fn write_out(text: &str, output: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source })
        }
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Write { path: "<stdout>".into(), source }),
    }
}

fn context(spec: CatalogSpec, opaque: bool) -> Result<ExprContext> {
    let ctx = ExprContext::new(spec)?;
    Ok(if opaque { ctx.with_mode(DresserMode::Opaque) } else { ctx })
}

fn emit(report: &VerificationReport, args: &ReportArgs, stdout: &mut dyn Write) -> Result<u8> {
    write_out(&emit_report(report, args.format), args.output.as_deref(), stdout)?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn verify(
    spec: &CatalogSpec,
    targets: &[Target],
    opts: &SuiteOptions,
    args: &ReportArgs,
    stdout: &mut dyn Write,
) -> Result<u8> {
    record_timings(args.timings);
    let report = run_suite(spec, &targets.iter().copied().collect(), opts)?;
    emit(&report, args, stdout)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Check { config, report } => {
            let spec = read_spec(&config)?;
            verify(&spec, &[Target::Smatrix, Target::Defect], &SuiteOptions::default(), &report, stdout)
        }
        Command::Verify { targets, config, orders, sequential, report } => {
            let selected: Vec<Target> = parse_targets(&targets)?.into_iter().collect();
            let spec = read_spec(&config)?;
            let opts = SuiteOptions { orders, parallel: !sequential };
            verify(&spec, &selected, &opts, &report, stdout)
        }
        Command::Nf { expr, config, opaque_dressers } => {
            let ctx = context(read_spec(&config)?, opaque_dressers)?;
            let p = nf(&lower(&parse_expr(&expr)?, &ctx)?, &ctx)?;
            write_out(&format!("{}\n", from_poly(&p)?), None, stdout)?;
            Ok(EXIT_PASS)
        }
        Command::Commute { first, second, config, opaque_dressers } => {
            let ctx = context(read_spec(&config)?, opaque_dressers)?;
            let x = lower(&parse_expr(&first)?, &ctx)?;
            let y = lower(&parse_expr(&second)?, &ctx)?;
            let p = nf(&commutator(&x, &y), &ctx)?;
            write_out(&format!("{}\n", from_poly(&p)?), None, stdout)?;
            Ok(EXIT_PASS)
        }
        Command::Report { input, format, output } => {
            let text = match input {
                Some(path) => read_file(&path)?,
                None => {
                    let mut s = String::new();
                    std::io::stdin()
                        .read_to_string(&mut s)
                        .map_err(|source| CliError::Read { path: "<stdin>".into(), source })?;
                    s
                }
            };
            let report = parse_report(&text)?;
            write_out(&emit_report(&report, format), output.as_deref(), stdout)?;
            Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

/// Runs the command line, writing results to `stdout` and diagnostics to
/// stderr. Returns the process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let code = run_with(args, &mut lock);
    let _ = lock.flush();
    code
}
