//! Library side of the `volut` command: suite reports, the named check
//! batteries and the file-based subcommands.

pub mod commands;
pub mod report;
pub mod suites;

pub use report::{CheckEntry, Status, SuiteReport};
pub use suites::{run_suite, SuiteOptions, DEFAULT_SEED, SUITES};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("resource cap: {0}")]
    Cap(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Exit status for a completed run: 0 when nothing failed, 1 otherwise.
pub fn exit_code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

/// Exit status for errors that prevent a verdict.
pub const EXIT_MALFORMED: i32 = 2;
