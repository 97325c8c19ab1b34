//! Command-line front end, edge-list files, report formats and reference
//! tables for `oscnet-core`.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod edges;
pub mod error;
pub mod parallel;
pub mod render;
pub mod tables;

pub use error::CliError;
