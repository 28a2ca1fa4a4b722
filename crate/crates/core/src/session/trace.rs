use serde::{Deserialize, Serialize};

/// Smoothed beliefs for one node series, re-evaluated after every interval.
///
/// Column `k` holds the marginals of the series at times `0..=k` given the evidence
/// received up to interval `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeliefTrace {
    /// Series name without the interval, e.g. `OBJ1`.
    pub node: String,
    pub states: Vec<String>,
    pub columns: Vec<TraceColumn>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceColumn {
    pub eval_time: u32,
    pub entries: Vec<TraceEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub time: u32,
    pub belief: Vec<f64>,
}

impl BeliefTrace {
    pub fn new(node: impl Into<String>, states: Vec<String>) -> Self {
        BeliefTrace {
            node: node.into(),
            states,
            columns: Vec::new(),
        }
    }

    /// Belief over states of the node at `time`, as evaluated during `eval_time`.
    pub fn get(&self, eval_time: u32, time: u32) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.eval_time == eval_time)?
            .entries
            .iter()
            .find(|e| e.time == time)
            .map(|e| e.belief.as_slice())
    }

    pub fn eval_times(&self) -> impl Iterator<Item = u32> + '_ {
        self.columns.iter().map(|c| c.eval_time)
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Largest deviation of any distribution's total from one.
    pub fn max_normalization_error(&self) -> f64 {
        self.columns
            .iter()
            .flat_map(|c| &c.entries)
            .map(|e| (e.belief.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}
