//! Verification harness: configuration, named checks, report records and
//! the `run` / `compute` front ends used by the `ybalg` binary.

pub mod checks;
pub mod compute;
pub mod config;
pub mod report;
pub mod runner;

pub use checks::Check;
pub use config::{parse_complex_list, parse_complex_pair, ConfigError, ConfigFile, RunConfig};
pub use report::{parse_record, Params, ReportRecord};
pub use runner::{run, RunSummary};

/// Exit status of a run.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
