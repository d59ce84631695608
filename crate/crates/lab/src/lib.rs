//! File formats, reports and the command-line front end for `isobound-core`.

pub mod cli;
pub mod error;
pub mod off;
pub mod report;

pub use error::{LabError, Result};
