//! IO companion of `mulab-core`: JSON file formats, report rendering, the
//! implication catalog, deterministic worker pools, and the command
//! runners behind the `mulab` binary.

pub mod catalog;
pub mod config;
pub mod formats;
pub mod parallel;
pub mod report;
pub mod runners;
