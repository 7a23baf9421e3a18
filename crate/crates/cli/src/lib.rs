//! File formats, run manifests and command implementations behind the
//! `spectral-gates` binary.

pub mod commands;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod output;

pub use error::{CliError, Result};
