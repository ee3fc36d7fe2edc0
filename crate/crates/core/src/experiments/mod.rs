//! Seeded batch experiments, their output formats and the acceptance suite.

pub mod acceptance;
mod config;
mod output;
mod run;

pub use config::{ExperimentConfig, Mode};
pub use output::{emit, from_csv, to_csv, to_json, Format, JsonRecord, JsonReport, CSV_HEADER};
pub use run::{
    greedy_levels, prediction, run_experiment, run_trial, summarize, Summary, TrialRecord, HEAVY_EPS, ZETA3,
};
