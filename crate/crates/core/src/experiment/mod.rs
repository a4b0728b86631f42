//! Declarative, seeded experiments producing CSV tables.

mod config;
mod runner;
pub mod seeds;
mod table;

pub use config::{
    parse_config, ExperimentConfig, ExperimentKind, StateSpec, DEFAULT_ENSEMBLE, DEFAULT_EPSILON,
    DEFAULT_LAMBDAS, DEFAULT_NOISE_SPREAD, DEFAULT_REALIZATIONS, MAX_J,
};
pub use runner::{initial_states, run_experiment};
pub use table::{emit_results, parse_results, Column, ColumnType, Provenance, ResultTable};
