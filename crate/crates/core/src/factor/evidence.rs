use std::collections::btree_map::{self, BTreeMap};

use crate::error::{Error, Result};

use super::VarId;

/// An observation of one variable.
#[derive(Clone, Debug, PartialEq)]
pub enum Finding {
    /// The variable is known to be in this state (index into its state list).
    Hard(usize),
    /// Likelihood of the observation under each state of the variable.
    Virtual(Vec<f64>),
}

impl Finding {
    pub(crate) fn check_virtual(var: VarId, likelihood: &[f64], card: usize) -> Result<()> {
        let bad = |reason: String| Err(Error::MalformedVirtual { var, reason });
        if likelihood.len() != card {
            return bad(format!("{} entries for {} states", likelihood.len(), card));
        }
        if likelihood.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return bad("entries must be finite and non-negative".into());
        }
        if !likelihood.iter().any(|v| *v > 0.0) {
            return bad("at least one entry must be positive".into());
        }
        Ok(())
    }

    /// Checks the finding against a variable of cardinality `card`.
    pub fn validate(&self, var: VarId, card: usize) -> Result<()> {
        match self {
            Finding::Hard(s) if *s >= card => Err(Error::StateOutOfRange {
                var,
                index: *s,
                cardinality: card,
            }),
            Finding::Hard(_) => Ok(()),
            Finding::Virtual(l) => Finding::check_virtual(var, l, card),
        }
    }

    /// Likelihood this finding assigns to `state`.
    pub fn likelihood(&self, state: usize) -> f64 {
        match self {
            Finding::Hard(s) => (*s == state) as u8 as f64,
            Finding::Virtual(l) => l[state],
        }
    }
}

/// Findings keyed by variable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Evidence {
    findings: BTreeMap<VarId, Finding>,
}

impl Evidence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: VarId, finding: Finding) {
        self.findings.insert(var, finding);
    }

    pub fn set_hard(&mut self, var: VarId, state: usize) {
        self.set(var, Finding::Hard(state));
    }

    pub fn set_virtual(&mut self, var: VarId, likelihood: Vec<f64>) {
        self.set(var, Finding::Virtual(likelihood));
    }

    pub fn with_hard(mut self, var: VarId, state: usize) -> Self {
        self.set_hard(var, state);
        self
    }

    pub fn remove(&mut self, var: VarId) -> Option<Finding> {
        self.findings.remove(&var)
    }

    pub fn get(&self, var: VarId) -> Option<&Finding> {
        self.findings.get(&var)
    }

    pub fn hard_state(&self, var: VarId) -> Option<usize> {
        match self.get(var) {
            Some(Finding::Hard(s)) => Some(*s),
            _ => None,
        }
    }

    pub fn is_hard(&self, var: VarId) -> bool {
        self.hard_state(var).is_some()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, VarId, Finding> {
        self.findings.iter()
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    /// Keeps only the findings whose variable satisfies `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(VarId) -> bool) -> Evidence {
        Evidence {
            findings: self
                .findings
                .iter()
                .filter(|(v, _)| keep(**v))
                .map(|(v, f)| (*v, f.clone()))
                .collect(),
        }
    }
}
