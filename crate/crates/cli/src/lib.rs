//! Library side of the `stirmod` command-line tool.

pub mod report;
pub mod suites;
pub mod table;
