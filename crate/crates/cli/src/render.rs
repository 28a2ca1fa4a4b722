//! Text heatmaps of belief traces.

use std::fmt::Write;

use beamdbn::session::BeliefTrace;

use crate::run::RunReport;

/// Glyphs from empty to certain.
pub const RAMP: [char; 6] = [' ', '.', ':', '*', '#', '@'];

/// Glyph for one belief: the decile `floor(10 b)` picks `RAMP[decile.div_ceil(2)]`.
pub fn glyph(belief: f64) -> char {
    let decile = (belief.clamp(0.0, 1.0) * 10.0).floor() as usize;
    RAMP[decile.div_ceil(2)]
}

/// One row per evaluation time; each row holds one cell per state for every interval
/// evaluated so far, intervals separated by `|`.
pub fn render_trace(trace: &BeliefTrace) -> String {
    let width = trace.states.len().max(2);
    let last = trace.columns.iter().map(|c| c.eval_time).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{} [{}]", trace.node, trace.states.join(" "));
    let mut header = String::from("     ");
    for t in 0..=last {
        let _ = write!(header, "|{:<width$}", format!("T{t}"));
    }
    let _ = writeln!(out, "{header}|");
    for col in &trace.columns {
        let _ = write!(out, "{:<5}", format!("T{}", col.eval_time));
        for t in 0..=last {
            out.push('|');
            match col.entries.iter().find(|e| e.time == t) {
                Some(e) => {
                    out.extend(e.belief.iter().map(|&b| glyph(b)));
                    out.extend(std::iter::repeat_n(' ', width - e.belief.len()));
                }
                None => out.extend(std::iter::repeat_n(' ', width)),
            }
        }
        out.push_str("|\n");
    }
    out
}

/// Final-interval beliefs and the evidence log, as plain text.
pub fn render_summary(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scenario {} ({} variant), {} intervals",
        report.scenario, report.params.variant, report.intervals
    );
    for rec in &report.evidence_log {
        let _ = writeln!(
            out,
            "T{}: P(readings | earlier) = {:.6}, P(all readings) = {:.6e}",
            rec.time, rec.step_likelihood, rec.cumulative
        );
    }
    for trace in report.all_traces() {
        let Some(col) = trace.columns.last() else {
            continue;
        };
        let _ = writeln!(out, "{} during T{}:", trace.node, col.eval_time);
        for e in &col.entries {
            let cells: Vec<String> = trace
                .states
                .iter()
                .zip(&e.belief)
                .map(|(s, b)| format!("{s}={b:.4}"))
                .collect();
            let _ = writeln!(out, "  T{}: {}", e.time, cells.join(" "));
        }
    }
    if let Some(dev) = report.oracle_deviation {
        let _ = writeln!(out, "oracle check: max deviation {dev:.3e}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use beamdbn::session::{TraceColumn, TraceEntry};

    #[test]
    fn ramp_endpoints() {
        assert_eq!(glyph(1.0), '@');
        assert_eq!(glyph(0.0), ' ');
        assert_eq!(glyph(0.09), ' ');
        assert_eq!(glyph(0.1), '.');
        assert_eq!(glyph(0.35), ':');
        assert_eq!(glyph(0.55), '*');
        assert_eq!(glyph(0.75), '#');
        assert_eq!(glyph(0.95), '@');
    }

    #[test]
    fn one_row_per_eval_time() {
        let mut trace = BeliefTrace::new("OBJ1", vec!["R1".into(), "R2".into()]);
        for k in 1..=2 {
            let entries = (0..=k)
                .map(|t| TraceEntry {
                    time: t,
                    belief: vec![1.0, 0.0],
                })
                .collect();
            trace.columns.push(TraceColumn {
                eval_time: k,
                entries,
            });
        }
        let text = render_trace(&trace);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2], "T1   |@ |@ |  |");
        assert_eq!(lines[3], "T2   |@ |@ |@ |");
        assert_eq!(text, render_trace(&trace));
    }
}
