use thiserror::Error;

use crate::factor::VarId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The evidence has zero probability under the model.
    #[error("impossible evidence: the findings have zero probability under the model")]
    ImpossibleEvidence,

    #[error("variable {var} has cardinality {left} in one factor and {right} in another")]
    CardinalityMismatch {
        var: VarId,
        left: usize,
        right: usize,
    },

    #[error("variable {0} is not in the factor scope")]
    NotInScope(VarId),

    #[error("variable {0} appears twice in a factor scope")]
    RepeatedScope(VarId),

    #[error("table has {actual} entries but the scope requires {expected}")]
    TableSize { expected: usize, actual: usize },

    #[error("table entry {index} is {value}; entries must be finite and non-negative")]
    InvalidEntry { index: usize, value: f64 },

    #[error("variable {0} has no states")]
    NoStates(VarId),

    #[error("variable {var} lists state {state:?} twice")]
    DuplicateState { var: VarId, state: String },

    #[error("variable {var} has no state {state:?}")]
    UnknownState { var: VarId, state: String },

    #[error("state index {index} out of range for {var} with {cardinality} states")]
    StateOutOfRange {
        var: VarId,
        index: usize,
        cardinality: usize,
    },

    #[error("virtual finding for {var}: {reason}")]
    MalformedVirtual { var: VarId, reason: String },

    #[error("unknown variable {0}")]
    UnknownVariable(VarId),

    #[error("variable {0} is already in the network")]
    DuplicateVariable(VarId),

    #[error("CPT for {var} is invalid: {reason}")]
    InvalidCpt { var: VarId, reason: String },

    #[error("query variable {0} carries hard evidence")]
    QueryEvidenced(VarId),

    #[error("query is empty")]
    EmptyQuery,

    #[error("elimination order is invalid: {0}")]
    InvalidOrder(String),

    #[error("enumeration cap of {cap} joint states exceeded")]
    EnumerationCap { cap: u64 },

    #[error("cannot parse variable name {0:?}")]
    ParseVarId(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("missing parameter {param} for the {variant} variant")]
    MissingParameter {
        param: &'static str,
        variant: &'static str,
    },

    #[error("parameter {param} = {value} is outside [0, 1]")]
    ParameterRange { param: &'static str, value: f64 },

    #[error("unknown sensor {0:?}")]
    UnknownSensor(String),

    #[error("unknown region {0:?}")]
    UnknownRegion(String),

    #[error("unknown object {0:?}")]
    UnknownObject(String),

    #[error("the {0} variant has no sensor status nodes")]
    NoStatusNodes(&'static str),

    #[error("status reports require a variant with linked status nodes, not {0}")]
    NoStatusChain(&'static str),

    #[error("status report at interval {requested} but the session is at interval {current}")]
    ReportTime { requested: u32, current: u32 },

    #[error("interval {requested} has not been reached (session is at {current})")]
    FutureTime { requested: u32, current: u32 },
}
