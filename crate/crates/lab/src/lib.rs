//! Driver for `ussd-core`: figure tables, teleportation transcripts and the
//! self-test battery, written as CSV or JSON.

pub mod commands;
pub mod config;
pub mod error;
pub mod sample;
pub mod selftest;
pub mod table;

use std::fs::File;
use std::io::{BufWriter, Write};

pub use config::{Command, RunConfig};
pub use error::LabError;
pub use table::{Cell, Format, Table};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "USSD_LAB_THREADS";

/// Outcome of a command: the table to emit and whether every check passed.
pub struct Outcome {
    pub table: Table,
    pub ok: bool,
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, LabError> {
    let table = match &cfg.command {
        Command::Eval(a) => commands::cmd_eval(a)?,
        Command::Fig2(a) => commands::cmd_fig2(a)?,
        Command::Fig3(a) => commands::cmd_fig3(a)?,
        Command::Fig4(a) => commands::cmd_fig4(a)?,
        Command::Teleport(a) => commands::cmd_teleport(a)?,
        Command::Selftest(a) => {
            if let Some(t) = a.tolerance {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(LabError::invalid("tolerance", format!("{t}")));
                }
            }
            let results = selftest::run_battery(a.tolerance, &a.only);
            if results.is_empty() {
                return Err(LabError::invalid("only", "no check matches the filter"));
            }
            let ok = results.iter().all(|r| r.passed());
            return Ok(Outcome { table: selftest::report(&results, a.tolerance, &a.only), ok });
        }
    };
    Ok(Outcome { table, ok: true })
}

pub fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Selftest(_) => Format::Json,
        _ => Format::Csv,
    }
}

/// Sizes the global worker pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> Result<(), LabError> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| LabError::invalid("USSD_LAB_THREADS", v.clone()))?;
    if n == 0 {
        return Err(LabError::invalid("USSD_LAB_THREADS", "must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

/// Runs the command and writes its table. Returns the process exit code.
pub fn run(cfg: &RunConfig) -> Result<i32, LabError> {
    configure_threads()?;
    let outcome = execute(cfg)?;
    let format = cfg.format.unwrap_or_else(|| default_format(&cfg.command));
    match &cfg.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            outcome.table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            outcome.table.write(format, &mut w)?;
            w.flush()?;
        }
    }
    if !outcome.ok {
        for row in &outcome.table.rows {
            if row[3] == Cell::Bool(false) {
                if let Cell::Text(name) = &row[0] {
                    eprintln!("FAILED {name}");
                }
            }
        }
        return Ok(1);
    }
    Ok(0)
}
