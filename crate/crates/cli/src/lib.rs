//! Command-line front end: group specs, the built-in catalog, the on-disk cache and the
//! subcommands themselves. `main.rs` only wires `run` to the process.

pub mod cache;
pub mod catalog;
pub mod commands;
pub mod groupspec;
pub mod render;

pub use commands::run;
