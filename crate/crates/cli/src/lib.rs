//! Command-line front end for `maxpair-core`: reference resolution, the
//! subcommand bodies and the reproduction suite.

pub mod commands;
pub mod repro;
pub mod resolve;
