//! Command-line front end and JSON formats over `sosnag-core`.

pub mod cli;
pub mod error;
pub mod exec;
pub mod format;

pub use cli::{dispatch, dispatch_to};
pub use error::CliError;
