//! Example models, trace files and the `sim` runner for `hysim-core`.

pub mod cli;
pub mod models;
pub mod params;
pub mod registry;
pub mod rng;
pub mod trace;

pub use registry::{BuildError, ModelEntry, ModelRegistry};
