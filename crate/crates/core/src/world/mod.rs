//! Domain configuration: regions, sensors, objects and sensor models, and their
//! compilation into the CPTs of the unrolled network.

mod cpt;
mod layout;
mod params;

pub use cpt::{
    act, aggregate_crossings, bc_act_cpt, bc_inv_chain_cpt, bc_inv_prior, bc_obs_cpt, motion_prior,
    obs, status, status_prior, transition_cpt, Cpt,
};
pub use layout::{Layout, ObjectSpec, Sensor, DISTRIBUTION_TOLERANCE};
pub use params::{SensorModelParams, Variant};

pub const MOTION_STATES: [&str; 2] = ["stat", "move"];
pub const ACT_STATES: [&str; 4] = ["nc", "dir1", "dir2", "both"];
pub const OBS_STATES: [&str; 3] = ["nc", "dir1", "dir2"];
pub const STATUS_STATES: [&str; 2] = ["work", "def"];
pub const EXTENDED_STATUS_STATES: [&str; 4] = ["work", "def-ghost", "def-dir", "def-miss"];
