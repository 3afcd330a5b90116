//! Argument parsing and dispatch.

use crate::commands::{self, Outcome};
use crate::config::{RawConfig, RunConfig, DEFAULT_CONFIG};
use crate::error::{CliError, CliResult, ErrorRecord, EXIT_OK, EXIT_VALIDATION, SCHEMA_VERSION};
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

/// Strong-coupling cavity QED toolkit.
#[derive(Debug, Parser)]
#[command(name = "cavity", version)]
pub struct Cli {
    /// Configuration file; the bundled default is used when absent.
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,

    /// Override one configuration key, e.g. `--set model.g2=0.04`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,

    /// Shorthand for `--set output.format=<FORMAT>`.
    #[arg(long, global = true)]
    pub format: Option<String>,

    /// Shorthand for `--set output.path=<PATH>`; `-` is standard output.
    #[arg(long, short, global = true)]
    pub output: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the invariant suite; exit 2 if any residual exceeds its tolerance.
    Verify,
    /// List every resonance root for the configured harmonics.
    Resonance,
    /// Gate unitary at one root, optionally compared with exact integration.
    Gate,
    /// Integrate the Schrödinger equation from a dressed or cat state.
    Simulate,
    /// Resonance summaries over a parameter range, in parallel.
    Sweep,
    /// Print the fully resolved configuration in canonical form.
    Config,
}

fn load(cli: &Cli) -> CliResult<(RawConfig, RunConfig)> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?,
        None => DEFAULT_CONFIG.to_string(),
    };
    let mut raw = RawConfig::parse(&text)?;
    let mut overrides = cli.overrides.clone();
    if let Some(f) = &cli.format {
        overrides.push(format!("output.format={f}"));
    }
    if let Some(p) = &cli.output {
        overrides.push(format!("output.path={p}"));
    }
    raw.apply_overrides(&overrides)?;
    let cfg = RunConfig::from_raw(&raw)?;
    Ok((raw, cfg))
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<Option<CliError>> {
    let (raw, cfg) = load(cli)?;
    let outcome: Outcome = match cli.command {
        Command::Verify => commands::verify::run(&cfg)?,
        Command::Resonance => commands::resonance::run(&cfg)?,
        Command::Gate => commands::gate::run(&cfg)?,
        Command::Simulate => commands::simulate::run(&cfg)?,
        Command::Sweep => commands::sweep::run(&raw, &cfg)?,
        Command::Config => {
            stdout.write_all(cfg.to_text().as_bytes()).map_err(|e| CliError::io("stdout", e))?;
            return Ok(None);
        }
    };
    let bytes = outcome.report.render(cfg.output.format)?;
    if cfg.output.path == "-" {
        stdout.write_all(&bytes).map_err(|e| CliError::io("stdout", e))?;
    } else {
        std::fs::write(&cfg.output.path, &bytes).map_err(|e| CliError::io(&cfg.output.path, e))?;
    }
    Ok(outcome.failure)
}

fn report(err: &CliError, stderr: &mut dyn Write) -> i32 {
    for rec in err.records() {
        let line = serde_json::to_string(&rec).unwrap_or_else(|_| format!("{{\"message\":\"{}\"}}", rec.message));
        let _ = writeln!(stderr, "{line}");
    }
    err.exit_code()
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rec = ErrorRecord {
                schema_version: SCHEMA_VERSION,
                status: "error",
                exit_code: EXIT_VALIDATION,
                kind: "usage".into(),
                key: None,
                line: None,
                message: e.to_string().trim().to_string(),
            };
            let _ = writeln!(stderr, "{}", serde_json::to_string(&rec).unwrap_or_default());
            return EXIT_VALIDATION;
        }
    };
    match execute(&cli, stdout) {
        Ok(None) => EXIT_OK,
        Ok(Some(err)) | Err(err) => report(&err, stderr),
    }
}
