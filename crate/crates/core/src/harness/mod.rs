//! Data generation, file formats and the replicated experiment grid.

pub mod experiment;
pub mod io;
pub mod simulate;

pub use experiment::{
    run_experiment, write_outputs, write_summary, ExperimentConfig, ExperimentOutput, Method, RunManifest, SummaryRow,
};
pub use io::{load_csv_dataset, read_dataset, write_dataset};
pub use simulate::{simulate_dataset, surrogate_with_mle, wais_like_surrogate};
