//! Config parsing, report formats, and workflows behind the `gaudin-pair`
//! binary, exposed as a library so integration tests can drive them.

pub mod config;
pub mod output;
pub mod workflows;
