use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The role a variable plays in the unrolled network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    /// Position of an object.
    Obj,
    /// Whether an object moves during an interval.
    Motion,
    /// Actual crossings of a sensor during a transition.
    BcAct,
    /// Crossing signal reported by a sensor.
    BcObs,
    /// Working/defective status of a sensor.
    BcInv,
    /// Free-standing variable, used for hand-built networks.
    Aux,
}

impl NodeKind {
    pub fn label(self) -> &'static str {
        match self {
            NodeKind::Obj => "OBJ",
            NodeKind::Motion => "MOTION",
            NodeKind::BcAct => "BC-ACT",
            NodeKind::BcObs => "BC-OBS",
            NodeKind::BcInv => "BC-INV",
            NodeKind::Aux => "X",
        }
    }
}

/// Structured variable name: kind, entity (0-based object or sensor index) and interval.
///
/// Rendered as `OBJ1(0)`: the entity is displayed 1-based, the interval in parentheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId {
    pub kind: NodeKind,
    pub entity: u32,
    pub time: u32,
}

impl VarId {
    pub const fn new(kind: NodeKind, entity: u32, time: u32) -> Self {
        VarId { kind, entity, time }
    }

    pub const fn obj(object: u32, time: u32) -> Self {
        VarId::new(NodeKind::Obj, object, time)
    }

    pub const fn motion(object: u32, time: u32) -> Self {
        VarId::new(NodeKind::Motion, object, time)
    }

    pub const fn bc_act(sensor: u32, time: u32) -> Self {
        VarId::new(NodeKind::BcAct, sensor, time)
    }

    pub const fn bc_obs(sensor: u32, time: u32) -> Self {
        VarId::new(NodeKind::BcObs, sensor, time)
    }

    pub const fn bc_inv(sensor: u32, time: u32) -> Self {
        VarId::new(NodeKind::BcInv, sensor, time)
    }

    pub const fn aux(index: u32) -> Self {
        VarId::new(NodeKind::Aux, index, 0)
    }

    /// Node name without the interval, e.g. `BC-ACT3`.
    pub fn series_name(&self) -> String {
        format!("{}{}", self.kind.label(), self.entity + 1)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}({})", self.kind.label(), self.entity + 1, self.time)
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseVarId(s.to_string());
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let time: u32 = s[open + 1..s.len() - 1].parse().map_err(|_| bad())?;
        let (kind, entity) = parse_series(&s[..open]).ok_or_else(bad)?;
        Ok(VarId::new(kind, entity, time))
    }
}

/// Parses a series name such as `OBJ1` or `BC-INV3` into its kind and 0-based entity.
pub fn parse_series(name: &str) -> Option<(NodeKind, u32)> {
    let digits = name.find(|c: char| c.is_ascii_digit())?;
    let kind = match &name[..digits] {
        "OBJ" => NodeKind::Obj,
        "MOTION" => NodeKind::Motion,
        "BC-ACT" => NodeKind::BcAct,
        "BC-OBS" => NodeKind::BcObs,
        "BC-INV" => NodeKind::BcInv,
        "X" => NodeKind::Aux,
        _ => return None,
    };
    let entity: u32 = name[digits..].parse().ok()?;
    if entity == 0 {
        return None;
    }
    Some((kind, entity - 1))
}

/// A discrete random variable with an ordered list of state labels.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteVariable {
    id: VarId,
    states: Vec<String>,
}

impl DiscreteVariable {
    pub fn new<S: Into<String>>(id: VarId, states: impl IntoIterator<Item = S>) -> Result<Self> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(Error::NoStates(id));
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(Error::DuplicateState {
                    var: id,
                    state: s.clone(),
                });
            }
        }
        Ok(DiscreteVariable { id, states })
    }

    pub fn id(&self) -> VarId {
        self.id
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn cardinality(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, label: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| Error::UnknownState {
                var: self.id,
                state: label.to_string(),
            })
    }
}
