//! Exact inference over dynamic belief networks that track objects moving between
//! regions separated by light-beam sensors, and that diagnose faulty sensors from
//! inconsistent crossing data.
//!
//! - [`factor`]: factors, networks, evidence, variable elimination and an enumeration oracle.
//! - [`world`]: layouts, objects and sensor models compiled into CPTs.
//! - [`session`]: the growing unrolled network, one interval per observation event.

pub mod error;
pub mod factor;
pub mod session;
pub mod world;

pub use error::{Error, Result};
