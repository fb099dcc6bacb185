//! Command-line front end: `run`, `sweep`, `spectrum`, `validate`.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration or usage
//! error, 3 numerical failure in at least one cell.

pub mod config;
pub mod records;
pub mod spectrum;
pub mod sweep;
pub mod validate;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use self::config::RunConfig;
use self::records::Format;
use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cdqa", version, about = "Counter-diabatic quantum annealing simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One record per (protocol, N, tau) cell.
    Run(CommonArgs),
    /// TTS curve plus short- and long-time minimum tables.
    Sweep(CommonArgs),
    /// Instantaneous spectrum and occupations for a single cell.
    Spectrum(CommonArgs),
    /// Oracle-backed self-checks.
    Validate {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output file (`run`, `spectrum`) or directory (`sweep`); stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main() -> i32 {
    main_from(std::env::args_os())
}

pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => EXIT_CONFIG,
                _ => EXIT_NUMERICAL,
            }
        }
    }
}

fn jobs(requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn emit(path: Option<&Path>, text: &str) -> crate::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Config(format!("cannot write to stdout: {e}")))
        }
    }
}

fn report_failures(records: &[records::Record]) -> i32 {
    let messages = records::failure_messages(records);
    for m in &messages {
        eprintln!("{m}");
    }
    if messages.is_empty() {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    }
}

fn dispatch(command: Command) -> crate::Result<i32> {
    match command {
        Command::Run(args) => {
            let cfg = RunConfig::from_path(&args.config)?;
            let records = records::execute_config(&cfg, jobs(args.jobs))?;
            emit(args.out.as_deref(), &records::render(&records, &cfg.outputs, args.format.into()))?;
            Ok(report_failures(&records))
        }
        Command::Sweep(args) => {
            let cfg = RunConfig::from_path(&args.config)?;
            let records = records::execute_config(&cfg, jobs(args.jobs))?;
            let tables = sweep::tables(&sweep::curves(&records));
            let runs = records::render(&records, &cfg.outputs, Format::Csv);
            match &args.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)
                        .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
                    emit(Some(&dir.join("runs.csv")), &runs)?;
                    for (name, text) in &tables {
                        emit(Some(&dir.join(format!("{name}.csv"))), text)?;
                    }
                }
                None => {
                    let mut text = String::new();
                    for (name, body) in std::iter::once(("runs", runs)).chain(tables) {
                        text.push_str(&format!("# {name}\n{body}\n"));
                    }
                    emit(None, &text)?;
                }
            }
            Ok(report_failures(&records))
        }
        Command::Spectrum(args) => {
            let cfg = RunConfig::from_path(&args.config)?;
            let tau = cfg.tau.values()?[0];
            let trace = spectrum::compute(&cfg)?;
            emit(args.out.as_deref(), &spectrum::render(&trace, tau))?;
            Ok(EXIT_OK)
        }
        Command::Validate { out } => {
            let report = validate::run();
            emit(out.as_deref(), &report.render())?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_VALIDATION })
        }
    }
}
