//! Scenario runner for the beamdbn tracking engine.
//!
//! A scenario file describes the regions, sensors and objects, the sensor model and the
//! readings of each interval. [`execute`] parses it, runs the session, prints a summary
//! and writes the requested export.

pub mod export;
pub mod render;
pub mod run;
pub mod scenario;

use std::io::Write;
use std::path::{Path, PathBuf};

pub use export::Format;
pub use run::{run, RunOptions, RunReport};
pub use scenario::{parse_scenario, ScenarioConfig, ScenarioError};

/// Largest oracle deviation a run may report and still succeed.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_IMPOSSIBLE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Scenario { path: String, source: ScenarioError },
    #[error(transparent)]
    Model(#[from] beamdbn::Error),
    #[error("oracle check failed: deviation {0:e} exceeds {ORACLE_TOLERANCE:e}")]
    Oracle(f64),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(beamdbn::Error::ImpossibleEvidence) => EXIT_IMPOSSIBLE,
            _ => EXIT_CONFIG,
        }
    }
}

/// Everything the `run` subcommand does besides argument parsing.
#[derive(Debug, Clone, Default)]
pub struct Invocation {
    pub scenario: PathBuf,
    pub options: RunOptions,
    pub trace: bool,
    pub export: Option<Format>,
    pub out: Option<PathBuf>,
}

/// Runs one scenario file; output files are only written once the run has succeeded.
pub fn execute(inv: &Invocation, stdout: &mut impl Write) -> Result<RunReport, CliError> {
    let path = inv.scenario.display().to_string();
    let text = std::fs::read_to_string(&inv.scenario).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    let config = parse_scenario(&text).map_err(|source| CliError::Scenario { path, source })?;
    let stem = inv
        .scenario
        .file_stem()
        .map_or("scenario".into(), |s| s.to_string_lossy().into_owned());
    let name = config.name.clone().unwrap_or_else(|| stem.clone());

    let report = run(&config, &name, &inv.options)?;
    if let Some(dev) = report.oracle_deviation {
        if dev > ORACLE_TOLERANCE {
            return Err(CliError::Oracle(dev));
        }
    }

    let mut text = render::render_summary(&report);
    if inv.trace {
        for trace in report.all_traces() {
            text.push('\n');
            text.push_str(&render::render_trace(trace));
        }
    }
    if let Some(format) = inv.export {
        let dir = inv.out.clone().unwrap_or_else(|| PathBuf::from("."));
        let file = format!("{stem}.{}", format.extension());
        let written = export::write_file(&dir, &file, &export::render(&report, format)).map_err(
            |source| CliError::Write {
                path: display(&dir, &file),
                source,
            },
        )?;
        text.push_str(&format!("wrote {}\n", written.display()));
    }
    let _ = stdout.write_all(text.as_bytes());
    Ok(report)
}

fn display(dir: &Path, file: &str) -> String {
    dir.join(file).display().to_string()
}
