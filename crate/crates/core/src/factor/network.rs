use std::collections::HashMap;

use crate::error::{Error, Result};

use super::evidence::{Evidence, Finding};
use super::{DiscreteVariable, Factor, VarId};

/// Tolerance on CPT rows summing to one.
pub const CPT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
struct Node {
    var: DiscreteVariable,
    parents: Vec<VarId>,
    /// Scope is `parents ++ [var]`.
    cpt: Factor,
}

/// A directed acyclic graph of discrete variables, each with a CPT.
///
/// Nodes are kept in insertion order. Parents must already be present when a node is
/// added, so insertion order is always a topological order and cycles cannot form.
#[derive(Clone, Debug, Default)]
pub struct Network {
    nodes: Vec<Node>,
    index: HashMap<VarId, usize>,
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `var` with the given parents and CPT table.
    ///
    /// `table` is row-major over `parents ++ [var]`, so each consecutive run of
    /// `var.cardinality()` entries is one conditional distribution.
    pub fn add_node(
        &mut self,
        var: DiscreteVariable,
        parents: Vec<VarId>,
        table: Vec<f64>,
    ) -> Result<()> {
        let id = var.id();
        if self.index.contains_key(&id) {
            return Err(Error::DuplicateVariable(id));
        }
        let cpt = self.build_cpt(&var, &parents, table)?;
        self.index.insert(id, self.nodes.len());
        self.nodes.push(Node { var, parents, cpt });
        Ok(())
    }

    /// Replaces the parents and CPT of an existing node.
    ///
    /// New parents must precede the node in insertion order.
    pub fn replace_cpt(&mut self, id: VarId, parents: Vec<VarId>, table: Vec<f64>) -> Result<()> {
        let pos = *self.index.get(&id).ok_or(Error::UnknownVariable(id))?;
        for p in &parents {
            match self.index.get(p) {
                Some(&pp) if pp < pos => {}
                Some(_) => {
                    return Err(Error::InvalidCpt {
                        var: id,
                        reason: format!("parent {p} does not precede the node"),
                    })
                }
                None => return Err(Error::UnknownVariable(*p)),
            }
        }
        let var = self.nodes[pos].var.clone();
        let cpt = self.build_cpt(&var, &parents, table)?;
        self.nodes[pos].parents = parents;
        self.nodes[pos].cpt = cpt;
        Ok(())
    }

    fn build_cpt(
        &self,
        var: &DiscreteVariable,
        parents: &[VarId],
        table: Vec<f64>,
    ) -> Result<Factor> {
        let id = var.id();
        let mut scope = Vec::with_capacity(parents.len() + 1);
        let mut cards = Vec::with_capacity(parents.len() + 1);
        for &p in parents {
            if p == id {
                return Err(Error::InvalidCpt {
                    var: id,
                    reason: "node is its own parent".into(),
                });
            }
            scope.push(p);
            cards.push(self.variable(p)?.cardinality());
        }
        scope.push(id);
        cards.push(var.cardinality());
        let cpt = Factor::new(scope, cards, table).map_err(|e| Error::InvalidCpt {
            var: id,
            reason: e.to_string(),
        })?;
        for (row, chunk) in cpt.table().chunks(var.cardinality()).enumerate() {
            let sum: f64 = chunk.iter().sum();
            if (sum - 1.0).abs() > CPT_TOLERANCE {
                return Err(Error::InvalidCpt {
                    var: id,
                    reason: format!("row {row} sums to {sum}"),
                });
            }
        }
        Ok(cpt)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: VarId) -> bool {
        self.index.contains_key(&id)
    }

    /// Variable ids in insertion (topological) order.
    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        self.nodes.iter().map(|n| n.var.id())
    }

    pub fn variable(&self, id: VarId) -> Result<&DiscreteVariable> {
        self.node(id).map(|n| &n.var)
    }

    pub fn parents(&self, id: VarId) -> Result<&[VarId]> {
        self.node(id).map(|n| n.parents.as_slice())
    }

    pub fn cpt(&self, id: VarId) -> Result<&Factor> {
        self.node(id).map(|n| &n.cpt)
    }

    pub fn cardinality(&self, id: VarId) -> Result<usize> {
        self.variable(id).map(DiscreteVariable::cardinality)
    }

    fn node(&self, id: VarId) -> Result<&Node> {
        self.index
            .get(&id)
            .map(|&i| &self.nodes[i])
            .ok_or(Error::UnknownVariable(id))
    }

    /// All CPTs, in insertion order.
    pub fn factors(&self) -> impl Iterator<Item = &Factor> + '_ {
        self.nodes.iter().map(|n| &n.cpt)
    }

    /// A hard finding for `id` naming its state by label.
    pub fn hard_finding(&self, id: VarId, label: &str) -> Result<Finding> {
        Ok(Finding::Hard(self.variable(id)?.state_index(label)?))
    }

    /// Checks every finding refers to a known variable and is well formed.
    pub fn validate_evidence(&self, evidence: &Evidence) -> Result<()> {
        for (&var, finding) in evidence.iter() {
            finding.validate(var, self.cardinality(var)?)?;
        }
        Ok(())
    }

    /// The sub-network of nodes satisfying `keep`.
    ///
    /// Every kept node must have all its parents kept.
    pub fn restricted(&self, mut keep: impl FnMut(VarId) -> bool) -> Result<Network> {
        let mut out = Network::new();
        for node in &self.nodes {
            if !keep(node.var.id()) {
                continue;
            }
            if let Some(p) = node.parents.iter().find(|p| !out.contains(**p)) {
                return Err(Error::InvalidCpt {
                    var: node.var.id(),
                    reason: format!("parent {p} excluded from restriction"),
                });
            }
            out.index.insert(node.var.id(), out.nodes.len());
            out.nodes.push(node.clone());
        }
        Ok(out)
    }
}
