//! Library side of the `iqy-spectra` command: configuration, output
//! formatting and the subcommands.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod format;
pub mod tables;
