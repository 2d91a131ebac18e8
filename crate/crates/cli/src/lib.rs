//! Relation ingestion, run configuration and records, and verification
//! suites behind the `aeqs` binary.

pub mod error;
pub mod relations;
pub mod run;
pub mod verify;

pub use error::{CliError, Result};
pub use run::{run, Algorithm, RunConfig, RunRecord};
