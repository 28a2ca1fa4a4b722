//! Exact posteriors by variable elimination.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

use super::evidence::{Evidence, Finding};
use super::{Factor, Network, VarId};

/// Checks that every query variable exists, is unevidenced (hard) and listed once.
fn check_query(net: &Network, evidence: &Evidence, query: &[VarId]) -> Result<()> {
    for (i, &q) in query.iter().enumerate() {
        net.variable(q)?;
        if evidence.is_hard(q) {
            return Err(Error::QueryEvidenced(q));
        }
        if query[..i].contains(&q) {
            return Err(Error::RepeatedScope(q));
        }
    }
    Ok(())
}

/// Interaction graph over the variables left after hard evidence is sliced away.
fn interaction_graph(net: &Network, evidence: &Evidence) -> BTreeMap<VarId, BTreeSet<VarId>> {
    let mut graph: BTreeMap<VarId, BTreeSet<VarId>> = net
        .ids()
        .filter(|&v| !evidence.is_hard(v))
        .map(|v| (v, BTreeSet::new()))
        .collect();
    for cpt in net.factors() {
        let live: Vec<VarId> = cpt
            .scope()
            .iter()
            .copied()
            .filter(|&v| !evidence.is_hard(v))
            .collect();
        for &a in &live {
            for &b in &live {
                if a != b {
                    graph.get_mut(&a).expect("live variable").insert(b);
                }
            }
        }
    }
    graph
}

/// Greedy min-fill elimination order over every non-query, non-hard-evidenced variable.
///
/// Ties are broken by fewest neighbours, then by the smallest variable id.
pub fn elimination_order(
    net: &Network,
    evidence: &Evidence,
    query: &[VarId],
) -> Result<Vec<VarId>> {
    check_query(net, evidence, query)?;
    let mut graph = interaction_graph(net, evidence);
    let mut candidates: BTreeSet<VarId> = graph
        .keys()
        .copied()
        .filter(|v| !query.contains(v))
        .collect();
    let mut order = Vec::with_capacity(candidates.len());

    while !candidates.is_empty() {
        let (_, _, next) = candidates
            .iter()
            .map(|&v| {
                let nbrs = &graph[&v];
                let fill = nbrs
                    .iter()
                    .enumerate()
                    .flat_map(|(i, a)| nbrs.iter().skip(i + 1).map(move |b| (a, b)))
                    .filter(|(a, b)| !graph[*a].contains(*b))
                    .count();
                (fill, nbrs.len(), v)
            })
            .min()
            .expect("non-empty candidates");

        let nbrs = graph.remove(&next).expect("candidate in graph");
        for a in &nbrs {
            let adj = graph.get_mut(a).expect("neighbour in graph");
            adj.remove(&next);
            adj.extend(nbrs.iter().filter(|b| *b != a));
        }
        candidates.remove(&next);
        order.push(next);
    }
    Ok(order)
}

/// Sums out `order` from the evidence-reduced CPTs and multiplies what is left.
///
/// The result is unnormalized; its total mass is the probability of the evidence.
fn eliminate(net: &Network, evidence: &Evidence, order: &[VarId]) -> Result<Factor> {
    net.validate_evidence(evidence)?;
    // Hard findings slice every CPT that mentions them; a virtual finding enters once,
    // as its own likelihood factor.
    let hard = evidence.filtered(|v| evidence.is_hard(v));
    let mut pool: Vec<Factor> = net
        .factors()
        .map(|f| f.reduce(&hard))
        .collect::<Result<_>>()?;
    for (&var, finding) in evidence.iter() {
        if let Finding::Virtual(lik) = finding {
            pool.push(Factor::new(vec![var], vec![lik.len()], lik.clone())?);
        }
    }

    for &v in order {
        let (bucket, rest): (Vec<Factor>, Vec<Factor>) =
            pool.into_iter().partition(|f| f.contains(v));
        pool = rest;
        let product = bucket
            .iter()
            .try_fold(Factor::unit(), |acc, f| acc.multiply(f))?;
        pool.push(product.sum_out(v)?);
    }
    pool.iter()
        .try_fold(Factor::unit(), |acc, f| acc.multiply(f))
}

fn check_order(net: &Network, evidence: &Evidence, query: &[VarId], order: &[VarId]) -> Result<()> {
    let expected: BTreeSet<VarId> = net
        .ids()
        .filter(|&v| !evidence.is_hard(v) && !query.contains(&v))
        .collect();
    let given: BTreeSet<VarId> = order.iter().copied().collect();
    if given.len() != order.len() {
        return Err(Error::InvalidOrder("order repeats a variable".into()));
    }
    if given != expected {
        return Err(Error::InvalidOrder(
            "order must list exactly the non-query, non-evidenced variables".into(),
        ));
    }
    Ok(())
}

/// Normalized joint posterior over `query` given `evidence`, with scope in query order.
pub fn posterior(net: &Network, evidence: &Evidence, query: &[VarId]) -> Result<Factor> {
    let order = elimination_order(net, evidence, query)?;
    posterior_with_order(net, evidence, query, &order)
}

/// As [`posterior`], eliminating in a caller-supplied order.
pub fn posterior_with_order(
    net: &Network,
    evidence: &Evidence,
    query: &[VarId],
    order: &[VarId],
) -> Result<Factor> {
    if query.is_empty() {
        return Err(Error::EmptyQuery);
    }
    check_query(net, evidence, query)?;
    check_order(net, evidence, query, order)?;
    eliminate(net, evidence, order)?.permute(query)?.normalize()
}

/// Probability of the evidence (the posterior normalizer).
pub fn evidence_probability(net: &Network, evidence: &Evidence) -> Result<f64> {
    let order = elimination_order(net, evidence, &[])?;
    Ok(eliminate(net, evidence, &order)?.total())
}

/// Posterior marginal of a single variable.
pub fn marginal(net: &Network, evidence: &Evidence, var: VarId) -> Result<Vec<f64>> {
    Ok(posterior(net, evidence, &[var])?.into_table())
}
