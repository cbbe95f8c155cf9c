//! Std companion to `dynepi-core`: JSON model documents, Graphviz export,
//! parallel simulation batches, CSV output and the `dynepi` command line.

pub mod batch;
pub mod cli;
pub mod document;
pub mod dot;
pub mod export;

pub use batch::{run_batch, run_batch_serial, Batch, RunRecord, SimulationReport};
pub use document::{load_model, save_model, DocumentError, ModelDocument};
pub use dot::{export_dot, DotError, EdgeStyle};
