//! Text formats: the formula DSL, truth-table files, JSON reports and
//! sweep CSV.

mod dsl;
mod sweep;
mod table_file;

pub use dsl::parse_formula;
pub use sweep::{parse_pattern, run_sweep, write_csv, Axis, SweepConfig, SweepRow, CSV_HEADER};
pub use table_file::{check_vars, load_truth_table, parse_truth_table};

/// JSON schema every serialized [`crate::compiler::RunReport`] satisfies.
pub const RUN_REPORT_SCHEMA: &str = include_str!("../../schema/run_report.schema.json");
