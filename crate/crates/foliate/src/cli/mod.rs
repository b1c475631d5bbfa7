//! Batch front end: JSON configuration in, CSV/JSON/SVG reports out.

mod commands;
mod config;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub use commands::{exit_code, run, Report, Status};
pub use config::{Command, Fault, Levels, RunConfig};
pub use verify::{r_table, run_checks, CheckResult, TABLE_MAX};

#[derive(Debug, Parser)]
#[command(name = "foliate", version, about = "Widths, Rips steps, interval exchanges and plane sections")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON configuration; defaults are used for missing fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Redraw (or nudge) critical plane levels instead of failing.
    #[arg(long)]
    pub jitter: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Parse arguments, run, print the report and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            for line in &report.lines {
                println!("{line}");
            }
            for f in &report.files {
                println!("wrote {}", cli.out.join(f).display());
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli) -> crate::Result<Report> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.jitter |= cli.jitter;
    match cli.threads {
        Some(0) => Err(crate::Error::Configuration("--threads must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| crate::Error::Configuration(e.to_string()))?;
            pool.install(|| run(cli.command, cfg, &cli.out))
        }
        None => run(cli.command, cfg, &cli.out),
    }
}
