//! Command-line front end: model files in, models and reports out.

mod commands;
mod format;

pub use commands::{execute, run, Cli, Failure};
pub use format::{parse, resolve_mc, serialize, serialize_cdga, serialize_coalgebra, serialize_dgl, serialize_linf, serialize_mc, Kind, Model};
