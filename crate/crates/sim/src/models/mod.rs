//! Example models.

pub mod active_client;
pub mod dyntopo;
pub mod fixtures;
pub mod mm2;
pub mod sampling;
