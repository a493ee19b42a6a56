//! Benchmark harness: data loading, experiment sweeps, CSV and plot
//! reporting, and runtime verification suites for the generated-loss
//! stack.

pub mod config;
pub mod data;
pub mod error;
pub mod idx;
pub mod report;
pub mod sweep;
pub mod synth;
pub mod verify;

pub use config::{default_lambdas, ConfigOverlay, ExperimentConfig, FamilyChoice};
pub use data::{load_mnist_dir, load_pair, subsample, Dataset, CLASSES};
pub use error::BenchError;
pub use report::{csv_string, emit_csv, emit_plot_script, plot_script_string, summary_table};
pub use sweep::{op_for, run_sweep, RunResult};
pub use synth::{synthetic_dataset, write_synthetic_corpus};
pub use verify::{run_all, CheckReport};
