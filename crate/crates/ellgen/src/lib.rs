//! Diagram files, reports and the command-line front end for `ellgen-core`.

pub mod cli;
pub mod complex;
pub mod format;
pub mod report;
