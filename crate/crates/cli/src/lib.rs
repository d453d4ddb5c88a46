//! Library behind the `gmml` binary: configuration files, grids, CSV output
//! and the subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod output;
pub mod validate;

pub use config::{Model, ModelConfig, ModelKind};
pub use error::{CliError, CliResult};
pub use grid::GridSpec;
