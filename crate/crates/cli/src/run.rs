//! Runs a scenario through a session and collects what gets reported.

use std::time::{Duration, Instant};

use beamdbn::factor::{brute_force_posterior, NodeKind, VarId};
use beamdbn::session::{BeliefTrace, Session};
use beamdbn::world::SensorModelParams;
use serde::{Deserialize, Serialize};

use crate::scenario::{ModelSettings, ScenarioConfig};

/// Command-line overrides applied on top of the scenario file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub model: ModelSettings,
    /// Replaces every object's mobility.
    pub mobility: Option<f64>,
    pub oracle_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceRecord {
    pub time: u32,
    /// Probability of this interval's readings given all earlier ones.
    pub step_likelihood: f64,
    /// Probability of all readings up to and including this interval.
    pub cumulative: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub params: SensorModelParams,
    pub intervals: u32,
    pub traces: Vec<BeliefTrace>,
    pub status: Vec<BeliefTrace>,
    pub evidence_log: Vec<EvidenceRecord>,
    /// Largest difference between elimination and enumeration over every traced
    /// belief, when the oracle check was requested.
    pub oracle_deviation: Option<f64>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl RunReport {
    /// Every trace, object series first.
    pub fn all_traces(&self) -> impl Iterator<Item = &BeliefTrace> + '_ {
        self.traces.iter().chain(&self.status)
    }

    /// Largest deviation of any reported distribution's total from one.
    pub fn max_normalization_error(&self) -> f64 {
        self.all_traces()
            .map(BeliefTrace::max_normalization_error)
            .fold(0.0, f64::max)
    }
}

/// Builds the session for `config` and feeds it every interval and status report.
pub fn build_session(config: &ScenarioConfig, opts: &RunOptions) -> beamdbn::Result<Session> {
    let params = config.model.resolve(&opts.model)?;
    let mut objects = config.objects.clone();
    if let Some(m) = opts.mobility {
        objects.iter_mut().for_each(|o| o.mobility = m);
    }
    let mut session = Session::new(config.layout.clone(), objects, params)?;
    inject_reports(&mut session, config, 0)?;
    for obs in &config.observations {
        session.advance(obs)?;
        let now = session.time();
        inject_reports(&mut session, config, now)?;
    }
    Ok(session)
}

fn inject_reports(session: &mut Session, config: &ScenarioConfig, at: u32) -> beamdbn::Result<()> {
    for r in config.reports.iter().filter(|r| r.at == at) {
        session.inject_status_report(&r.sensor, at, r.confidence)?;
    }
    Ok(())
}

fn traced(config: &ScenarioConfig, session: &Session) -> beamdbn::Result<Vec<(NodeKind, u32)>> {
    let mut series = Vec::new();
    if config.output.objects.is_empty() {
        series.extend((0..config.objects.len() as u32).map(|i| (NodeKind::Obj, i)));
    } else {
        for id in &config.output.objects {
            series.push((NodeKind::Obj, session.object_index(id)? as u32));
        }
    }
    if session.params().variant.has_status() {
        if config.output.status.is_empty() {
            series.extend((0..config.layout.sensors().len() as u32).map(|s| (NodeKind::BcInv, s)));
        } else {
            for id in &config.output.status {
                series.push((NodeKind::BcInv, config.layout.sensor_index(id)? as u32));
            }
        }
    }
    Ok(series)
}

/// Recomputes every traced belief by enumeration and returns the largest difference.
fn oracle_deviation(
    session: &Session,
    traces: &[(NodeKind, u32, &BeliefTrace)],
) -> beamdbn::Result<f64> {
    let mut worst: f64 = 0.0;
    for eval_time in 1..=session.time() {
        let (net, evidence) = session.view_at(eval_time)?;
        for &(kind, entity, trace) in traces {
            for t in 0..=eval_time {
                let Some(ve) = trace.get(eval_time, t) else {
                    continue;
                };
                let bf = brute_force_posterior(&net, &evidence, &[VarId::new(kind, entity, t)])?;
                for (a, b) in ve.iter().zip(bf.table()) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Runs the whole scenario.
pub fn run(config: &ScenarioConfig, name: &str, opts: &RunOptions) -> beamdbn::Result<RunReport> {
    let start = Instant::now();
    let session = build_session(config, opts)?;
    let series = traced(config, &session)?;

    let mut traces = Vec::new();
    let mut status = Vec::new();
    for &(kind, entity) in &series {
        let trace = session.trace_series(kind, entity)?;
        match kind {
            NodeKind::Obj => traces.push(trace),
            _ => status.push(trace),
        }
    }

    let mut cumulative = 1.0;
    let evidence_log = session
        .step_likelihoods()
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            cumulative *= p;
            EvidenceRecord {
                time: k as u32 + 1,
                step_likelihood: p,
                cumulative,
            }
        })
        .collect();

    let oracle = if opts.oracle_check {
        let by_kind: Vec<(NodeKind, u32, &BeliefTrace)> = series
            .iter()
            .zip(traces.iter().chain(&status))
            .map(|(&(k, e), t)| (k, e, t))
            .collect();
        Some(oracle_deviation(&session, &by_kind)?)
    } else {
        None
    };

    Ok(RunReport {
        scenario: name.to_string(),
        params: session.params().clone(),
        intervals: session.time(),
        traces,
        status,
        evidence_log,
        oracle_deviation: oracle,
        runtime: start.elapsed(),
    })
}
