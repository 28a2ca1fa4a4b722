//! Discrete factor algebra and exact inference.
//!
//! [`posterior`] runs variable elimination with a greedy min-fill order;
//! [`brute_force_posterior`] enumerates the full joint and serves as its oracle.

mod elimination;
mod enumerate;
mod evidence;
mod network;
mod table;
mod variable;

pub use elimination::{
    elimination_order, evidence_probability, marginal, posterior, posterior_with_order,
};
pub use enumerate::{brute_force_posterior, brute_force_posterior_capped, DEFAULT_ENUMERATION_CAP};
pub use evidence::{Evidence, Finding};
pub use network::{Network, CPT_TOLERANCE};
pub use table::Factor;
pub use variable::{parse_series, DiscreteVariable, NodeKind, VarId};
