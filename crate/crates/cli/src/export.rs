//! CSV and JSON exports of a run.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use beamdbn::session::BeliefTrace;

use crate::run::RunReport;

pub const CSV_HEADER: &str = "eval_time,node,time,state,belief";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// One line per (evaluation time, node, interval, state); beliefs to six decimals,
/// ties rounded to even.
pub fn traces_csv<'a>(traces: impl IntoIterator<Item = &'a BeliefTrace>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for trace in traces {
        for col in &trace.columns {
            for e in &col.entries {
                for (state, b) in trace.states.iter().zip(&e.belief) {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{:.6}",
                        col.eval_time, trace.node, e.time, state, b
                    );
                }
            }
        }
    }
    out
}

pub fn report_json(report: &RunReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

pub fn parse_report_json(text: &str) -> serde_json::Result<RunReport> {
    serde_json::from_str(text)
}

pub fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Csv => traces_csv(report.all_traces()),
        Format::Json => report_json(report),
    }
}

/// Writes `contents` to `dir/name` through a temporary file, so a failed write never
/// leaves a partial file under the final name.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map(|()| path)
}
