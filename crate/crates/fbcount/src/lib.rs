//! File formats and the command-line front end for `fbcount-core`.

pub mod cli;
pub mod report;
pub mod spec;
pub mod svg;
