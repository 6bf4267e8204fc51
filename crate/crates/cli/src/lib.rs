//! Command-line frontend for the dispatch engine: `estimate` learns a demand
//! model from GPS/occupancy traces, `dispatch` solves one rebalancing
//! problem for a fleet snapshot, `simulate` runs the receding-horizon loop
//! against a baseline on a synthetic scenario, and `report` aggregates
//! metrics files into cost tables.
//!
//! All outputs are reproducible: every random choice derives from the root
//! seed, and identical inputs produce byte-identical artifacts.

// Validation uses `!(x > 0.0)`-style guards on purpose: unlike `x <= 0.0`
// they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod formats;

use std::fmt;

/// Errors mapped onto process exit codes: usage/config problems exit 1,
/// data problems exit 2, an infeasible one-shot dispatch exits 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
            CliError::Infeasible(msg) => write!(f, "infeasible: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Data(err.to_string())
    }
}
