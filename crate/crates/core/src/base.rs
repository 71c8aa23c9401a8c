//! Base models and base components.
//!
//! A base model owns a shared p-state and a dynamic set of processes. The
//! current process set is a function of the shared p-state, so creating or
//! destroying a process is done by changing the p-state. After every change
//! the component reconciles its simulators with the new set.
//!
//! A transition at `t` runs, in order:
//!
//! 1. the guard: a non-imminent component with null discrete input is left
//!    untouched;
//! 2. the input function on `(p, x)`;
//! 3. every process whose next time is `t`, in ranking order;
//! 4. the conditional loop: while some live process has a true condition,
//!    resume the highest-ranked one. A process created during the current
//!    instant only becomes eligible at `t + ε`;
//! 5. `t_last ← t + ε` for every process that transitioned.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::any::Any;
use core::fmt::Debug;

use crate::component::{child_path, Component};
use crate::error::{InputRejected, KernelError};
use crate::process::{DynProcess, ProcessFault, ProcessName, Spawn};
use crate::time::HyTime;
use crate::trace::{time_value, Context, TraceKind};
use crate::value::{FlowValue, Value};

pub type ProcessSet = BTreeSet<ProcessName>;

/// Definition of a base model.
pub trait BaseModel: Send + 'static {
    /// Shared p-state.
    type State: Clone + Debug + Send + 'static;

    fn initial_state(&self) -> Self::State;

    /// Folds an input value into the shared p-state. Called on every
    /// effective transition, including those with a null discrete part.
    fn input(&self, _p: &mut Self::State, _x: &FlowValue) -> Result<(), InputRejected> {
        Ok(())
    }

    /// Names of the processes that exist in p-state `p`.
    fn processes(&self, p: &Self::State) -> ProcessSet;

    /// Resume order over a set of process names. Must return a permutation
    /// of `set`. Defaults to lexicographic order.
    fn rank(&self, set: &ProcessSet) -> Vec<ProcessName> {
        set.iter().cloned().collect()
    }

    /// Definition and initial p-state for a process entering the set.
    fn spawn(&self, name: &ProcessName, p: &Self::State) -> Option<Spawn<Self::State>>;

    /// Combines process outputs, given in ranking order, into the model output.
    fn output(&self, p: &Self::State, outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue;

    fn describe(&self, p: &Self::State) -> Value {
        Value::Text(format!("{p:?}"))
    }
}

/// What happened inside the last effective transition.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TransitionReport {
    pub time: HyTime,
    /// Processes that were imminent, in ranking order.
    pub scheduled: Vec<ProcessName>,
    /// One entry per conditional re-activation, in execution order.
    pub conditional: Vec<ProcessName>,
    /// `(name, t_last)` after the update step.
    pub updated: Vec<(ProcessName, HyTime)>,
    pub created: Vec<ProcessName>,
    pub removed: Vec<ProcessName>,
}

pub struct BaseComponent<M: BaseModel> {
    path: String,
    model: M,
    p: M::State,
    live: ProcessSet,
    procs: BTreeMap<ProcessName, Box<dyn DynProcess<M::State>>>,
    v: Option<FlowValue>,
    last_report: Option<TransitionReport>,
}

impl<M: BaseModel> BaseComponent<M> {
    /// Instantiates the model at time zero.
    pub fn new(model: M) -> Result<Self, KernelError> {
        Self::new_at(model, HyTime::ZERO)
    }

    /// Instantiates the model; initial processes get `t_last = created_at + ε`.
    pub fn new_at(model: M, created_at: HyTime) -> Result<Self, KernelError> {
        let p = model.initial_state();
        let mut c = BaseComponent {
            path: String::new(),
            model,
            p,
            live: ProcessSet::new(),
            procs: BTreeMap::new(),
            v: None,
            last_report: None,
        };
        c.reconcile(created_at, None)?;
        Ok(c)
    }

    pub fn with_path(mut self, path: impl Into<String>) -> Self {
        self.path = path.into();
        self
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn shared(&self) -> &M::State {
        &self.p
    }

    pub fn process(&self, name: &str) -> Option<&dyn DynProcess<M::State>> {
        self.procs.get(name).map(|b| &**b)
    }

    /// Names of live simulators, in key order.
    pub fn live_processes(&self) -> impl Iterator<Item = &ProcessName> {
        self.procs.keys()
    }

    pub fn process_count(&self) -> usize {
        self.procs.len()
    }

    pub fn last_report(&self) -> Option<&TransitionReport> {
        self.last_report.as_ref()
    }

    fn fault(&self, name: &ProcessName, fault: ProcessFault) -> KernelError {
        let path = child_path(&self.path, name.as_str());
        match fault {
            ProcessFault::Causality { t, t_last } => KernelError::Causality { path, t, t_last },
            ProcessFault::MissedTransition { t, next } => {
                KernelError::MissedTransition { path, t, next }
            }
            ProcessFault::ValueBeforeOutput => KernelError::ValueBeforeOutput { path },
            ProcessFault::SpuriousTransition { t } => KernelError::SpuriousTransition { path, t },
        }
    }

    /// Ranks `set`, checking that the model returned a permutation.
    fn ranked(&self, set: &ProcessSet) -> Result<Vec<ProcessName>, KernelError> {
        let order = self.model.rank(set);
        let permutation = order.len() == set.len()
            && order.iter().all(|n| set.contains(n))
            && !order
                .iter()
                .enumerate()
                .any(|(i, n)| order[..i].contains(n));
        if permutation {
            Ok(order)
        } else {
            Err(KernelError::InvalidRanking {
                path: self.path.clone(),
            })
        }
    }

    /// Brings the simulator map in line with the current process set.
    fn reconcile(
        &mut self,
        t: HyTime,
        mut report: Option<&mut TransitionReport>,
    ) -> Result<(), KernelError> {
        let target = self.model.processes(&self.p);
        if target == self.live {
            return Ok(());
        }
        let procs = &mut self.procs;
        procs.retain(|name, _| {
            let keep = target.contains(name);
            if !keep {
                if let Some(r) = report.as_deref_mut() {
                    r.removed.push(name.clone());
                }
            }
            keep
        });
        for name in &target {
            if procs.contains_key(name) {
                continue;
            }
            let spawn =
                self.model
                    .spawn(name, &self.p)
                    .ok_or_else(|| KernelError::UnknownProcess {
                        path: self.path.clone(),
                        name: name.as_str().into(),
                    })?;
            procs.insert(name.clone(), spawn.start(t));
            if let Some(r) = report.as_deref_mut() {
                r.created.push(name.clone());
            }
        }
        self.live = target;
        Ok(())
    }

    fn resume(
        &mut self,
        name: &ProcessName,
        t: HyTime,
        cause: &'static str,
        ctx: &mut Context<'_>,
    ) -> Result<(), KernelError> {
        let sim = self.procs.get_mut(name).expect("resumed process is live");
        if let Err(f) = sim.transition(t, &mut self.p) {
            return Err(self.fault(name, f));
        }
        let path = &self.path;
        let sim = &self.procs[name];
        ctx.emit(t, path, TraceKind::ProcessTransition, || {
            Value::record([
                ("process", Value::text(name.as_str())),
                ("cause", Value::text(cause)),
                ("state", sim.describe()),
            ])
        });
        Ok(())
    }

    fn transition_payload(&self, x: &FlowValue, report: &TransitionReport) -> Value {
        let names =
            |v: &[ProcessName]| Value::List(v.iter().map(|n| Value::text(n.as_str())).collect());
        Value::record([
            ("input", x.to_value()),
            ("scheduled", names(&report.scheduled)),
            ("conditional", names(&report.conditional)),
            (
                "updated",
                Value::List(
                    report
                        .updated
                        .iter()
                        .map(|(n, tl)| {
                            Value::record([
                                ("process", Value::text(n.as_str())),
                                ("t_last", time_value(*tl)),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("created", names(&report.created)),
            ("removed", names(&report.removed)),
            (
                "live",
                Value::List(self.procs.keys().map(|n| Value::text(n.as_str())).collect()),
            ),
            ("state", self.model.describe(&self.p)),
        ])
    }
}

impl<M: BaseModel> Component for BaseComponent<M> {
    fn path(&self) -> &str {
        &self.path
    }

    fn set_path(&mut self, path: String) {
        self.path = path;
    }

    fn next_time(&self) -> HyTime {
        self.procs
            .values()
            .map(|s| s.next_time())
            .min()
            .unwrap_or(HyTime::INFINITY)
    }

    fn output(&mut self, t: HyTime, ctx: &mut Context<'_>) -> Result<(), KernelError> {
        let order = self.ranked(&self.live)?;
        for name in &order {
            let sim = self
                .procs
                .get_mut(name)
                .expect("live set matches simulators");
            if let Err(f) = sim.output(t, &self.p) {
                return Err(self.fault(name, f));
            }
        }
        let mut outputs = Vec::with_capacity(order.len());
        for name in &order {
            let v = self.procs[name].value().map_err(|f| self.fault(name, f))?;
            outputs.push((name, v));
        }
        let v = self.model.output(&self.p, &outputs);
        ctx.emit(t, &self.path, TraceKind::Output, || v.to_value());
        self.v = Some(v);
        Ok(())
    }

    fn value(&self) -> Result<&FlowValue, KernelError> {
        self.v
            .as_ref()
            .ok_or_else(|| KernelError::ValueBeforeOutput {
                path: self.path.clone(),
            })
    }

    fn transition(
        &mut self,
        t: HyTime,
        x: &FlowValue,
        ctx: &mut Context<'_>,
    ) -> Result<(), KernelError> {
        let next = self.next_time();
        if t != next && x.discrete.is_none() {
            return Ok(());
        }
        if t > next {
            return Err(KernelError::MissedTransition {
                path: self.path.clone(),
                t,
                next,
            });
        }

        self.model
            .input(&mut self.p, x)
            .map_err(|InputRejected(reason)| KernelError::InputRejected {
                path: self.path.clone(),
                reason,
            })?;
        let mut report = TransitionReport {
            time: t,
            ..TransitionReport::default()
        };
        self.reconcile(t, Some(&mut report))?;

        let imminent: ProcessSet = self
            .procs
            .iter()
            .filter(|(_, s)| s.next_time() == t)
            .map(|(n, _)| n.clone())
            .collect();
        let mut touched = imminent.clone();
        report.scheduled = self.ranked(&imminent)?;
        for name in report.scheduled.clone() {
            // an earlier process in this instant may have removed it
            if !self.procs.contains_key(&name) {
                continue;
            }
            self.resume(&name, t, "scheduled", ctx)?;
            self.reconcile(t, Some(&mut report))?;
        }

        let bound = ctx.limits.max_conditional_iterations;
        loop {
            // processes created during this instant start at t + ε
            let eligible = |s: &dyn DynProcess<M::State>| s.t_last() <= t && s.condition(&self.p);
            if !self.procs.values().any(|s| eligible(&**s)) {
                break;
            }
            let ready: ProcessSet = self
                .procs
                .iter()
                .filter(|(_, s)| eligible(&***s))
                .map(|(n, _)| n.clone())
                .collect();
            if report.conditional.len() >= bound {
                return Err(KernelError::Livelock {
                    path: self.path.clone(),
                    t,
                    bound,
                });
            }
            let head = self.ranked(&ready)?.swap_remove(0);
            self.resume(&head, t, "conditional", ctx)?;
            touched.insert(head.clone());
            report.conditional.push(head);
            self.reconcile(t, Some(&mut report))?;
        }

        for name in &touched {
            if let Some(sim) = self.procs.get_mut(name) {
                sim.update(t);
                report.updated.push((name.clone(), sim.t_last()));
            }
        }

        if ctx.tracing() {
            let payload = self.transition_payload(x, &report);
            ctx.emit(t, &self.path, TraceKind::Transition, || payload);
        }
        self.last_report = Some(report);
        Ok(())
    }

    fn snapshot(&self) -> Value {
        let procs = self
            .procs
            .iter()
            .map(|(name, sim)| {
                Value::record([
                    ("name", Value::text(name.as_str())),
                    ("t_last", time_value(sim.t_last())),
                    (
                        "v",
                        sim.last_value()
                            .map(FlowValue::to_value)
                            .unwrap_or_default(),
                    ),
                    ("p", sim.describe()),
                ])
            })
            .collect();
        Value::record([
            ("path", Value::text(self.path.as_str())),
            (
                "v",
                self.v.as_ref().map(FlowValue::to_value).unwrap_or_default(),
            ),
            ("state", self.model.describe(&self.p)),
            ("processes", Value::List(procs)),
        ])
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
