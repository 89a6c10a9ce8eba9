//! Library side of the `projheat` binary: argument types, command runners,
//! serializable outputs and the verification suites.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod verify;

pub use error::CliError;
