//! Command-line front end for cactus barrier checks: rank-method lower
//! bounds, randomized verification campaigns, ceiling constants and limits
//! of spans.

pub mod commands;
pub mod files;
pub mod tensor;

pub use commands::{run, Cli};

/// Everything that ends a command with exit status 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cactus_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
