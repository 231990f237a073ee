//! Library surface of the omit-sim CLI: config parsing, result envelopes,
//! and the subcommand implementations, reused by the binary and the tests.

pub mod commands;
pub mod config;
pub mod output;
