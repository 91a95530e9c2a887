//! Instance files, CSV export, the `stplan` command-line tool and the JSON
//! HTTP API around `stplan-core`.

pub mod api;
pub mod commands;
pub mod error;
pub mod export;
pub mod file;

pub use error::{ErrorBody, Result, ServiceError};
pub use file::{load_instance, parse_instance, InstanceFile, Workbench};
