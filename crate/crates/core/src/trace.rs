//! Trace records and the step context threaded through every action.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::time::HyTime;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceKind {
    Output,
    Transition,
    ProcessTransition,
    TopologyChange,
}

impl TraceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceKind::Output => "output",
            TraceKind::Transition => "transition",
            TraceKind::ProcessTransition => "process-transition",
            TraceKind::TopologyChange => "topology-change",
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub time: HyTime,
    /// Slash-joined component names, e.g. `net/serverA` or `net/#exec`.
    pub path: String,
    pub kind: TraceKind,
    pub payload: Value,
}

/// Append-only consumer of trace records. Records arrive in nondecreasing
/// time order and must be kept in that order.
pub trait TraceSink {
    /// Components skip building payloads when this returns false.
    fn enabled(&self) -> bool {
        true
    }

    fn record(&mut self, record: TraceRecord);
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullSink;

impl TraceSink for NullSink {
    fn enabled(&self) -> bool {
        false
    }

    fn record(&mut self, _record: TraceRecord) {}
}

/// In-memory capture.
#[derive(Debug, Default, Clone)]
pub struct VecSink {
    pub records: Vec<TraceRecord>,
}

impl VecSink {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn of_kind<'a>(&'a self, kind: TraceKind) -> impl Iterator<Item = &'a TraceRecord> + 'a {
        self.records.iter().filter(move |r| r.kind == kind)
    }
}

impl TraceSink for VecSink {
    fn record(&mut self, record: TraceRecord) {
        self.records.push(record);
    }
}

impl<S: TraceSink + ?Sized> TraceSink for &mut S {
    fn enabled(&self) -> bool {
        (**self).enabled()
    }

    fn record(&mut self, record: TraceRecord) {
        (**self).record(record)
    }
}

/// Default cap on conditional re-activations inside one base transition.
pub const DEFAULT_MAX_CONDITIONAL_ITERATIONS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_conditional_iterations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_conditional_iterations: DEFAULT_MAX_CONDITIONAL_ITERATIONS,
        }
    }
}

/// Per-run context passed to every output and transition action.
pub struct Context<'a> {
    sink: &'a mut dyn TraceSink,
    pub limits: Limits,
}

impl<'a> Context<'a> {
    pub fn new(sink: &'a mut dyn TraceSink) -> Self {
        Context {
            sink,
            limits: Limits::default(),
        }
    }

    pub fn with_limits(sink: &'a mut dyn TraceSink, limits: Limits) -> Self {
        Context { sink, limits }
    }

    pub fn tracing(&self) -> bool {
        self.sink.enabled()
    }

    /// Emits a record whose payload is only built when tracing is on.
    pub fn emit(
        &mut self,
        time: HyTime,
        path: &str,
        kind: TraceKind,
        payload: impl FnOnce() -> Value,
    ) {
        if self.sink.enabled() {
            self.sink.record(TraceRecord {
                time,
                path: path.into(),
                kind,
                payload: payload(),
            });
        }
    }
}

/// `{t, eps}` record, or the text `"inf"` for `+∞`.
pub fn time_value(t: HyTime) -> Value {
    if t.is_infinite() {
        Value::text("inf")
    } else {
        Value::record([("t", Value::Real(t.real())), ("eps", Value::Int(t.eps()))])
    }
}
