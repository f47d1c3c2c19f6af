//! Batch front end for `hyd2d-core`: run configuration, the `solve`, `scan`,
//! `verify` and `export` commands, and their file formats.

// `!(x > 0.0)` guards reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod run;
pub mod verify;

pub use config::{Format, MassSpec, RunConfig, TargetSpec};
pub use error::CliError;
