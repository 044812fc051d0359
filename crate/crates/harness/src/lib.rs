//! Experiment front end for `qgrain`: single runs, parameter sweeps written
//! as JSON lines, and reports with plot-ready data.

pub mod cli;
pub mod error;
pub mod report;
pub mod state_file;
pub mod sweep;

pub use error::{HarnessError, Result, EXIT_RUNTIME, EXIT_USAGE};
pub use report::{emit_report, read_results, summarize, Report, ReportFormat};
pub use state_file::{parse_state_file, StateFile};
pub use sweep::{parse_config, render_results, run_sweep, sweep_rows, ResultRow, SweepConfig};
