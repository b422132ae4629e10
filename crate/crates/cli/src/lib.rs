//! Experiment driver behind the `discrimlab` binary.
//!
//! A [`RunConfig`] merges a flat `key = value` file with command-line
//! overrides; [`run`] executes one command and returns a [`Report`] that
//! [`report::emit`] writes as CSV or JSON.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{run, Outcome};
pub use config::{CommandKind, Format, Params, RunConfig};
pub use error::{CliError, Result};
pub use report::{Cell, Report};
