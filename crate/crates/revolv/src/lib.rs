//! File formats, threaded sweeps and the command-line front end for
//! `revolv-core`.

pub mod cli;
pub mod error;
pub mod formats;
pub mod parallel;

pub use error::CliError;
