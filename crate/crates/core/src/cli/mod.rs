//! Command-line front end.

pub mod commands;
pub mod config;
pub mod scenarios;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, ErrorClass, Result};
pub use commands::{Context, Outcome};
pub use config::{OutputFormat, RunConfig};
pub use scenarios::{Scenario, SCENARIOS};

#[derive(Debug, Parser)]
#[command(name = "neumann-bounds", version, about = "Lower bounds for Neumann eigenvalues under domain mappings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Worker threads for parallel sweeps and matrix products.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for sampled dilatation estimates.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Built-in scenario name.
    #[arg(long, global = true)]
    pub scenario: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Compute a lower-bound certificate.
    Bound,
    /// Run the discrete eigenvalue oracle on the target domain.
    Oracle,
    /// Check certificate orderings against the oracle.
    Validate,
    /// Tabulate cusp bounds over gamma, r or a.
    Sweep,
    /// Regenerate published numbers and compare.
    Reproduce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Text,
}

impl Command {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "bound" => Ok(Self::Bound),
            "oracle" => Ok(Self::Oracle),
            "validate" => Ok(Self::Validate),
            "sweep" => Ok(Self::Sweep),
            "reproduce" => Ok(Self::Reproduce),
            _ => Err(Error::Config(format!("unknown command {s:?}"))),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Config => 1,
        ErrorClass::Inapplicable => 2,
        ErrorClass::Oracle => 3,
    }
}

/// One machine-readable line per error.
pub fn error_line(e: &Error) -> String {
    let class = match e.class() {
        ErrorClass::Config => "config",
        ErrorClass::Inapplicable => "inapplicable",
        ErrorClass::Oracle => "oracle",
    };
    format!("error: class={class} tag={} reason={}", e.tag(), config::one_line(&e.to_string()))
}

fn context(cli: &Cli) -> Result<(Command, Context)> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(&p.to_string_lossy())?,
        None => RunConfig::default(),
    };
    let command = match (cli.command, &cfg.run.command) {
        (Some(c), _) => c,
        (None, Some(s)) => Command::parse(s)?,
        (None, None) => return Err(Error::Config("no command given".into())),
    };
    let format = match (cli.format, &cfg.output.format) {
        (Some(FormatArg::Csv), _) => OutputFormat::Csv,
        (Some(FormatArg::Text), _) => OutputFormat::Text,
        (None, Some(f)) => OutputFormat::parse(f)?,
        (None, None) if command == Command::Validate || command == Command::Reproduce => OutputFormat::Text,
        (None, None) => OutputFormat::Csv,
    };
    let seed = cli.seed.or(cfg.run.seed);
    let ctx = Context { scenario: cli.scenario.clone(), format, seed, cfg };
    Ok((command, ctx))
}

fn set_threads(n: Option<usize>) -> Result<()> {
    match n {
        Some(0) => Err(Error::Config("--threads must be >= 1".into())),
        // a second call in the same process keeps the first pool
        Some(n) => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(())
        }
        None => Ok(()),
    }
}

/// Runs a parsed command line and returns the outcome without printing,
/// along with the output path from `--out` or `output.path`.
pub fn execute(cli: &Cli) -> Result<(Outcome, Option<PathBuf>)> {
    let (command, ctx) = context(cli)?;
    set_threads(cli.threads.or(ctx.cfg.run.threads))?;
    let path = cli.out.clone().or_else(|| ctx.cfg.output.path.as_ref().map(PathBuf::from));
    let outcome = match command {
        Command::Bound => commands::run_bound(&ctx),
        Command::Oracle => commands::run_oracle(&ctx),
        Command::Validate => commands::run_validate(&ctx),
        Command::Sweep => commands::run_sweep(&ctx),
        Command::Reproduce => commands::run_reproduce(&ctx),
    }?;
    Ok((outcome, path))
}

/// Full command-line entry point. Returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = writeln!(stderr, "error: class=config tag=config reason={}", config::one_line(&text));
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok((o, path)) => {
            let written = match &path {
                Some(p) => std::fs::write(p, &o.output).map_err(Error::from),
                None => stdout.write_all(o.output.as_bytes()).map_err(Error::from),
            };
            match written {
                Ok(()) => o.code,
                Err(e) => {
                    let _ = writeln!(stderr, "{}", error_line(&e));
                    exit_code(&e)
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_line(&e));
            exit_code(&e)
        }
    }
}
