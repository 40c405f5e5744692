//! Library half of the `h1k` command-line tool: instance files, reports and
//! the subcommands themselves. The binary only parses arguments and writes
//! output.

// `!(x <= tol)` is used on purpose: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod instance;
pub mod report;

pub use commands::{
    Settings, EXIT_EXTREME, EXIT_INPUT_ERROR, EXIT_NEAR_THRESHOLD, EXIT_NON_EXTREME,
};
pub use instance::{ConfigOverrides, Expectation, InstanceFile, ProblemInstance};
pub use report::{CorpusRow, CorpusSummary, Report, Tolerances, REPORT_VERSION};
