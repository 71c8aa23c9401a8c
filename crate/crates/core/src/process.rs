//! Processes: non-preemptive units of behavior living inside a base component.
//!
//! A process never receives input directly. It reads and writes the shared
//! p-state of its enclosing base component, and is resumed either when its
//! own deadline expires (`min(time_to_input, time_to_output)` after its last
//! transition) or when its condition holds on the current shared p-state.
//!
//! Behavior is split by an index: [`ProcessModel::index`] picks the active
//! segment for the current p-state and every other function is evaluated at
//! that segment.

use alloc::borrow::Cow;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use core::any::Any;
use core::borrow::Borrow;
use core::fmt;
use core::fmt::Debug;
use core::marker::PhantomData;

use crate::time::HyTime;
use crate::value::{FlowValue, Value};

/// Name of a process inside its base component. Fixed names borrow a
/// `'static` string; runtime-created processes own theirs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcessName(Cow<'static, str>);

impl ProcessName {
    pub const fn fixed(name: &'static str) -> Self {
        ProcessName(Cow::Borrowed(name))
    }

    pub fn new(name: impl Into<String>) -> Self {
        ProcessName(Cow::Owned(name.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for ProcessName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ProcessName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Debug for ProcessName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Debug::fmt(&*self.0, f)
    }
}

impl From<&'static str> for ProcessName {
    fn from(s: &'static str) -> Self {
        ProcessName::fixed(s)
    }
}

/// Behavior of one process kind, generic over the shared p-state `S` of the
/// base model it lives in.
pub trait ProcessModel<S>: Send + 'static {
    /// Private p-state.
    type State: Clone + Debug + Send + 'static;
    /// Segment selector.
    type Index: Copy + Debug;

    fn index(&self, p: &Self::State) -> Self::Index;

    /// Delay until the next sampling instant; `INFINITY` when none.
    fn time_to_input(&self, i: Self::Index, p: &Self::State) -> HyTime;

    /// Delay until the next discrete output; `INFINITY` when none.
    fn time_to_output(&self, i: Self::Index, p: &Self::State) -> HyTime;

    /// Whether the process can resume now, given the shared p-state.
    fn condition(&self, _i: Self::Index, _p: &Self::State, _shared: &S) -> bool {
        false
    }

    /// Resumes the process. `elapsed` is the time since its last transition.
    fn transition(&self, i: Self::Index, p: &mut Self::State, elapsed: HyTime, shared: &mut S);

    fn continuous_output(
        &self,
        _i: Self::Index,
        _p: &Self::State,
        _elapsed: HyTime,
        _shared: &S,
    ) -> Value {
        Value::Unit
    }

    /// Event emitted when the output deadline is reached.
    fn discrete_output(&self, i: Self::Index, p: &Self::State, shared: &S) -> Value;

    /// Trace and snapshot representation of a p-state.
    fn describe(&self, p: &Self::State) -> Value {
        Value::Text(format!("{p:?}"))
    }
}

/// Ordering violations detected by a process simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessFault {
    Causality { t: HyTime, t_last: HyTime },
    MissedTransition { t: HyTime, next: HyTime },
    ValueBeforeOutput,
    SpuriousTransition { t: HyTime },
}

/// Runtime of one process: its model, p-state, last transition time and
/// last computed output.
pub struct ProcessSimulator<S, M: ProcessModel<S>> {
    model: M,
    p: M::State,
    t_last: HyTime,
    v: Option<FlowValue>,
    _shared: PhantomData<fn(&mut S)>,
}

impl<S, M: ProcessModel<S>> ProcessSimulator<S, M> {
    /// A process created at `created_at` starts with `t_last = created_at + ε`.
    pub fn new(model: M, initial: M::State, created_at: HyTime) -> Self {
        ProcessSimulator {
            model,
            p: initial,
            t_last: created_at.succ(),
            v: None,
            _shared: PhantomData,
        }
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn state(&self) -> &M::State {
        &self.p
    }

    pub fn t_last(&self) -> HyTime {
        self.t_last
    }

    fn output_deadline(&self) -> HyTime {
        let i = self.model.index(&self.p);
        self.t_last + self.model.time_to_output(i, &self.p)
    }

    pub fn next_time(&self) -> HyTime {
        let i = self.model.index(&self.p);
        let rho = self.model.time_to_input(i, &self.p);
        let omega = self.model.time_to_output(i, &self.p);
        self.t_last + rho.min(omega)
    }

    /// Computes and stores the output at `t`. The discrete part is non-null
    /// exactly when `t` is the output deadline.
    pub fn output(&mut self, t: HyTime, shared: &S) -> Result<(), ProcessFault> {
        if t < self.t_last {
            return Err(ProcessFault::Causality {
                t,
                t_last: self.t_last,
            });
        }
        let next = self.next_time();
        if t > next {
            return Err(ProcessFault::MissedTransition { t, next });
        }
        let i = self.model.index(&self.p);
        let elapsed = t - self.t_last;
        let continuous = self.model.continuous_output(i, &self.p, elapsed, shared);
        // compared as t == t_last + ω rather than e == ω: it is the same
        // floating-point sum that produced the scheduled instant
        let discrete = if t == self.output_deadline() {
            Some(self.model.discrete_output(i, &self.p, shared))
        } else {
            None
        };
        self.v = Some(FlowValue {
            continuous,
            discrete,
        });
        Ok(())
    }

    pub fn value(&self) -> Result<&FlowValue, ProcessFault> {
        self.v.as_ref().ok_or(ProcessFault::ValueBeforeOutput)
    }

    pub fn condition(&self, shared: &S) -> bool {
        let i = self.model.index(&self.p);
        self.model.condition(i, &self.p, shared)
    }

    /// Runs the active transition segment. Does not touch `t_last`; see
    /// [`ProcessSimulator::update`].
    pub fn transition(&mut self, t: HyTime, shared: &mut S) -> Result<(), ProcessFault> {
        if t < self.t_last {
            return Err(ProcessFault::Causality {
                t,
                t_last: self.t_last,
            });
        }
        if t != self.next_time() && !self.condition(shared) {
            return Err(ProcessFault::SpuriousTransition { t });
        }
        let i = self.model.index(&self.p);
        let elapsed = t - self.t_last;
        self.model.transition(i, &mut self.p, elapsed, shared);
        Ok(())
    }

    /// `t_last ← t + ε`.
    pub fn update(&mut self, t: HyTime) {
        self.t_last = t.succ();
    }

    pub fn describe(&self) -> Value {
        self.model.describe(&self.p)
    }
}

impl<S, M> Debug for ProcessSimulator<S, M>
where
    M: ProcessModel<S>,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProcessSimulator")
            .field("p", &self.p)
            .field("t_last", &self.t_last)
            .field("v", &self.v)
            .finish()
    }
}

/// Object-safe view of a [`ProcessSimulator`], used by base components to
/// hold heterogeneous processes.
pub trait DynProcess<S>: Send {
    fn next_time(&self) -> HyTime;
    fn output(&mut self, t: HyTime, shared: &S) -> Result<(), ProcessFault>;
    fn value(&self) -> Result<&FlowValue, ProcessFault>;
    fn condition(&self, shared: &S) -> bool;
    fn transition(&mut self, t: HyTime, shared: &mut S) -> Result<(), ProcessFault>;
    fn update(&mut self, t: HyTime);
    fn t_last(&self) -> HyTime;
    fn describe(&self) -> Value;
    /// Last stored output without the ordering check.
    fn last_value(&self) -> Option<&FlowValue>;
    fn as_any(&self) -> &dyn Any;
}

impl<S: 'static, M: ProcessModel<S>> DynProcess<S> for ProcessSimulator<S, M> {
    fn next_time(&self) -> HyTime {
        ProcessSimulator::next_time(self)
    }

    fn output(&mut self, t: HyTime, shared: &S) -> Result<(), ProcessFault> {
        ProcessSimulator::output(self, t, shared)
    }

    fn value(&self) -> Result<&FlowValue, ProcessFault> {
        ProcessSimulator::value(self)
    }

    fn condition(&self, shared: &S) -> bool {
        ProcessSimulator::condition(self, shared)
    }

    fn transition(&mut self, t: HyTime, shared: &mut S) -> Result<(), ProcessFault> {
        ProcessSimulator::transition(self, t, shared)
    }

    fn update(&mut self, t: HyTime) {
        ProcessSimulator::update(self, t)
    }

    fn t_last(&self) -> HyTime {
        self.t_last
    }

    fn describe(&self) -> Value {
        ProcessSimulator::describe(self)
    }

    fn last_value(&self) -> Option<&FlowValue> {
        self.v.as_ref()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// A process definition paired with its initial p-state, waiting for the
/// base component to give it a creation time.
pub struct Spawn<S>(Box<dyn FnOnce(HyTime) -> Box<dyn DynProcess<S>> + Send>);

impl<S: 'static> Spawn<S> {
    pub fn new<M: ProcessModel<S>>(model: M, initial: M::State) -> Self {
        Spawn(Box::new(move |t| {
            Box::new(ProcessSimulator::new(model, initial, t)) as Box<dyn DynProcess<S>>
        }))
    }

    pub fn start(self, created_at: HyTime) -> Box<dyn DynProcess<S>> {
        (self.0)(created_at)
    }
}
