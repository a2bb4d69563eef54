//! Batch runner for the `fracvec` verifiers: a flat `key = value`
//! configuration names an experiment, the runner sweeps `alpha × grid`
//! and returns a [`ResultTable`] with one row per combination.

pub mod config;
mod error;
mod experiments;

pub use config::{Experiment, ExperimentConfig};
pub use error::CliError;
pub use experiments::{failures, run_experiment};
pub use fracvec::{convergence_order, emit, Cell, Format, ResultTable};
