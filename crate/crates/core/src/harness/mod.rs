//! Trial protocol: alternating learning and readout runs, novelty traces,
//! integrated/maximum output and CSV reporting.

mod experiment;
mod plan;
mod report;
mod trial;

pub use experiment::{
    run_experiment, run_experiment_from, ExperimentRun, ExperimentTrial, PhaseOutcome,
};
pub use plan::{ExperimentPlan, PhasePlan, Policy};
pub use report::{
    format_significant, format_table, parse_summary_csv, read_summary, summary_csv, trace_csv,
    trace_file_name, write_experiment, SummaryRow, SUMMARY_FILE, SUMMARY_HEADER, TRACE_HEADER,
};
pub use trial::{integrate, run_trial, Mode, TraceRecord, Trial, TrialOptions, TrialSummary};
