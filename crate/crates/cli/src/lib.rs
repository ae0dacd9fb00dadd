//! Command-line driver for fllab: random verification campaigns, single
//! orbital integrals, invariants and representatives, and the Fourier checks.

pub mod args;
pub mod commands;
pub mod report;

pub use args::Cli;
pub use commands::{execute, CliError, Output};
