//! File formats, parallel batch runners and the command line for
//! `entropy-core`.

pub mod bodies;
pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod output;
pub mod runners;

pub use error::{LabError, Result};
