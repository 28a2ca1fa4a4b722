//! Full-joint enumeration, used as an independent check on variable elimination.
//!
//! Assignments are generated depth-first in topological order, multiplying CPT entries
//! as each variable is fixed. A prefix whose running product is exactly zero is skipped:
//! every completion of it contributes exactly zero to every sum, so the result equals
//! that of enumerating all assignments.

use crate::error::{Error, Result};

use super::evidence::{Evidence, Finding};
use super::{Factor, Network, VarId};

/// Default bound on the number of joint (partial) assignments visited.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

struct Walk<'a> {
    vars: Vec<VarId>,
    cards: Vec<usize>,
    findings: Vec<Option<&'a Finding>>,
    /// For each variable, positions (in `vars`) of its CPT scope.
    scopes: Vec<Vec<usize>>,
    cpts: Vec<&'a Factor>,
    query_pos: Vec<usize>,
    query_cards: Vec<usize>,
    assignment: Vec<usize>,
    scratch: Vec<usize>,
    out: Vec<f64>,
    visited: u64,
    cap: u64,
}

impl Walk<'_> {
    fn descend(&mut self, depth: usize, weight: f64) -> Result<()> {
        if depth == self.vars.len() {
            let idx = self
                .query_pos
                .iter()
                .zip(&self.query_cards)
                .fold(0, |acc, (&p, &c)| acc * c + self.assignment[p]);
            self.out[idx] += weight;
            return Ok(());
        }
        for state in 0..self.cards[depth] {
            let lik = self.findings[depth].map_or(1.0, |f| f.likelihood(state));
            if lik == 0.0 {
                continue;
            }
            self.visited += 1;
            if self.visited > self.cap {
                return Err(Error::EnumerationCap { cap: self.cap });
            }
            self.assignment[depth] = state;
            self.scratch.clear();
            for &p in &self.scopes[depth] {
                self.scratch.push(self.assignment[p]);
            }
            let w = weight * lik * self.cpts[depth].value(&self.scratch);
            if w == 0.0 {
                continue;
            }
            self.descend(depth + 1, w)?;
        }
        Ok(())
    }
}

/// Joint posterior over `query` by enumerating the full joint distribution.
pub fn brute_force_posterior(
    net: &Network,
    evidence: &Evidence,
    query: &[VarId],
) -> Result<Factor> {
    brute_force_posterior_capped(net, evidence, query, DEFAULT_ENUMERATION_CAP)
}

pub fn brute_force_posterior_capped(
    net: &Network,
    evidence: &Evidence,
    query: &[VarId],
    cap: u64,
) -> Result<Factor> {
    if query.is_empty() {
        return Err(Error::EmptyQuery);
    }
    net.validate_evidence(evidence)?;
    let vars: Vec<VarId> = net.ids().collect();
    let pos_of = |v: VarId| vars.iter().position(|&x| x == v);
    let mut query_pos = Vec::with_capacity(query.len());
    let mut query_cards = Vec::with_capacity(query.len());
    for (i, &q) in query.iter().enumerate() {
        let p = pos_of(q).ok_or(Error::UnknownVariable(q))?;
        if evidence.is_hard(q) {
            return Err(Error::QueryEvidenced(q));
        }
        if query[..i].contains(&q) {
            return Err(Error::RepeatedScope(q));
        }
        query_pos.push(p);
        query_cards.push(net.cardinality(q)?);
    }

    let mut cards = Vec::with_capacity(vars.len());
    let mut scopes = Vec::with_capacity(vars.len());
    let mut cpts = Vec::with_capacity(vars.len());
    for &v in &vars {
        let cpt = net.cpt(v)?;
        cards.push(net.cardinality(v)?);
        scopes.push(
            cpt.scope()
                .iter()
                .map(|&s| pos_of(s).expect("scope in network"))
                .collect(),
        );
        cpts.push(cpt);
    }

    let size: usize = query_cards.iter().product();
    let mut walk = Walk {
        findings: vars.iter().map(|&v| evidence.get(v)).collect(),
        vars,
        cards,
        scopes,
        cpts,
        query_pos,
        query_cards: query_cards.clone(),
        assignment: Vec::new(),
        scratch: Vec::new(),
        out: vec![0.0; size],
        visited: 0,
        cap,
    };
    walk.assignment = vec![0; walk.vars.len()];
    walk.descend(0, 1.0)?;
    Factor::new(query.to_vec(), query_cards, walk.out)?.normalize()
}
