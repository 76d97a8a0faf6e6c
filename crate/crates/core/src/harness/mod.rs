//! Experiment harness: instance files, bundled fronts, and the batch
//! comparison of the pruning methods.

pub mod csvio;
pub mod experiment;
pub mod fronts;

pub use csvio::{ingest_csv, instance_to_csv, read_instance, write_instance, ReadOptions, Strictness};
pub use experiment::{
    k_for_percent, run_experiment, score, subsample, Cell, Column, Dataset, ExperimentConfig, MissingCell, PlotData,
    ReferenceRule, ReportTable, Scores, SummaryRow,
};
