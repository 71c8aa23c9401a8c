//! Simulation kernel for modular hybrid models built from communicating
//! processes.
//!
//! Base components enclose a dynamic set of non-preemptive processes that
//! share a p-state; networks compose base components (and other networks)
//! under a topology chosen at runtime by an executive. Time is superdense:
//! a transition at `t` takes effect at `t + ε`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod base;
pub mod component;
pub mod error;
pub mod network;
pub mod process;
pub mod root;
pub mod time;
pub mod trace;
pub mod value;

pub use base::{BaseComponent, BaseModel, ProcessSet, TransitionReport};
pub use component::{Component, ComponentFactory};
pub use error::{InputRejected, KernelError};
pub use network::{
    validate_topology, Coupling, DynExecutive, ExecutiveComponent, ExecutiveModel, Link,
    NetworkComponent, Topology, TopologyViolation, EXECUTIVE, NETWORK,
};
pub use process::{DynProcess, ProcessFault, ProcessModel, ProcessName, ProcessSimulator, Spawn};
pub use root::{run_simulation, Summary};
pub use time::HyTime;
pub use trace::{
    time_value, Context, Limits, NullSink, TraceKind, TraceRecord, TraceSink, VecSink,
    DEFAULT_MAX_CONDITIONAL_ITERATIONS,
};
pub use value::{FlowValue, Value};
