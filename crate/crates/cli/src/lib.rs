//! Command-line front end: expression language, suite orchestration and reports.

pub mod app;
pub mod emit;
pub mod error;
pub mod expr;
pub mod suite;

pub use emit::{config_digest, emit_report, parse_report, Format};
pub use error::{CliError, Result};
pub use expr::{from_poly, lower, parse_expr, Expr};
pub use suite::{parse_targets, run_suite, SuiteOptions, Target};
