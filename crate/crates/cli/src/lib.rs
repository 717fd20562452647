//! Command-line front end for the recoil decoherence model: scenario
//! configuration, figure datasets and the invariant suite.

pub mod commands;
pub mod config;
pub mod validate;
