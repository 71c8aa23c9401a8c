#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use hysim_core::*;

pub fn t(r: f64, k: i64) -> HyTime {
    HyTime::new(r, k)
}

pub fn set(names: &[&'static str]) -> ProcessSet {
    names.iter().map(|n| ProcessName::fixed(n)).collect()
}

/// Process that emits its tick count every `period`.
#[derive(Clone)]
pub struct Ticker {
    pub period: f64,
}

impl<S> ProcessModel<S> for Ticker {
    type State = i64;
    type Index = ();

    fn index(&self, _p: &i64) {}

    fn time_to_input(&self, _i: (), _p: &i64) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, _i: (), _p: &i64) -> HyTime {
        HyTime::from_real(self.period)
    }

    fn transition(&self, _i: (), p: &mut i64, _e: HyTime, _s: &mut S) {
        *p += 1;
    }

    fn continuous_output(&self, _i: (), p: &i64, _e: HyTime, _s: &S) -> Value {
        Value::Int(*p)
    }

    fn discrete_output(&self, _i: (), p: &i64, _s: &S) -> Value {
        Value::Int(*p + 1)
    }
}

/// One ticker named "timer"; output is the ticker's value.
pub struct TimerBase {
    pub period: f64,
}

impl BaseModel for TimerBase {
    type State = ();

    fn initial_state(&self) {}

    fn processes(&self, _p: &()) -> ProcessSet {
        set(&["timer"])
    }

    fn spawn(&self, _name: &ProcessName, _p: &()) -> Option<Spawn<()>> {
        Some(Spawn::new(
            Ticker {
                period: self.period,
            },
            0,
        ))
    }

    fn output(&self, _p: &(), outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        outputs[0].1.clone()
    }
}

/// Executive with a fixed topology and no processes.
pub struct StaticExec(pub Topology);

impl BaseModel for StaticExec {
    type State = ();

    fn initial_state(&self) {}

    fn processes(&self, _p: &()) -> ProcessSet {
        ProcessSet::new()
    }

    fn spawn(&self, _name: &ProcessName, _p: &()) -> Option<Spawn<()>> {
        None
    }

    fn output(&self, _p: &(), _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        FlowValue::null()
    }
}

impl ExecutiveModel for StaticExec {
    fn topology(&self, _p: &()) -> Topology {
        self.0.clone()
    }
}

/// Records every discrete value it receives. No processes.
pub struct Counter;

impl BaseModel for Counter {
    type State = Vec<Value>;

    fn initial_state(&self) -> Vec<Value> {
        Vec::new()
    }

    fn input(&self, p: &mut Vec<Value>, x: &FlowValue) -> Result<(), InputRejected> {
        if let Some(d) = &x.discrete {
            p.push(d.clone());
        }
        Ok(())
    }

    fn processes(&self, _p: &Vec<Value>) -> ProcessSet {
        ProcessSet::new()
    }

    fn spawn(&self, _n: &ProcessName, _p: &Vec<Value>) -> Option<Spawn<Vec<Value>>> {
        None
    }

    fn output(&self, p: &Vec<Value>, _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        FlowValue::continuous(Value::Int(p.len() as i64))
    }
}

/// Executive that routes `pulse` to `left` for `switch_after` ticks, then
/// to `right`. It ticks with the same period as the pulse source so the
/// switch coincides with a pulse.
pub struct SwitchExec {
    pub period: f64,
    pub switch_after: i64,
}

impl BaseModel for SwitchExec {
    type State = i64;

    fn initial_state(&self) -> i64 {
        0
    }

    fn processes(&self, _p: &i64) -> ProcessSet {
        set(&["switcher"])
    }

    fn spawn(&self, _name: &ProcessName, _p: &i64) -> Option<Spawn<i64>> {
        Some(Spawn::new(
            SwitchTicker {
                period: self.period,
                switch_after: self.switch_after,
            },
            0,
        ))
    }

    fn output(&self, _p: &i64, _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        FlowValue::null()
    }
}

pub struct SwitchTicker {
    period: f64,
    switch_after: i64,
}

impl ProcessModel<i64> for SwitchTicker {
    type State = i64;
    type Index = bool;

    fn index(&self, p: &i64) -> bool {
        *p < self.switch_after
    }

    fn time_to_input(&self, _i: bool, _p: &i64) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, counting: bool, _p: &i64) -> HyTime {
        if counting {
            HyTime::from_real(self.period)
        } else {
            HyTime::INFINITY
        }
    }

    fn transition(&self, _i: bool, p: &mut i64, _e: HyTime, shared: &mut i64) {
        *p += 1;
        *shared = *p;
    }

    fn discrete_output(&self, _i: bool, _p: &i64, _s: &i64) -> Value {
        Value::Unit
    }
}

impl ExecutiveModel for SwitchExec {
    fn topology(&self, ticks: &i64) -> Topology {
        let target = if *ticks < self.switch_after {
            "left"
        } else {
            "right"
        };
        Topology::new()
            .component("pulse", "pulse")
            .component("left", "counter")
            .component("right", "counter")
            .input(target, &["pulse"], Coupling::first())
            .output(&["pulse"], Coupling::first())
    }
}

/// Builds "pulse" (period 1 ticker), "counter" and "inner" (a network of
/// one pulse feeding its output).
pub struct Factory;

impl ComponentFactory for Factory {
    fn build(&self, model: &str, at: HyTime) -> Result<Box<dyn Component>, KernelError> {
        match model {
            "pulse" => Ok(Box::new(BaseComponent::new_at(
                TimerBase { period: 1.0 },
                at,
            )?)),
            "counter" => Ok(Box::new(BaseComponent::new_at(Counter, at)?)),
            "inner" => {
                let top = Topology::new()
                    .component("pulse", "pulse")
                    .output(&["pulse"], Coupling::first());
                let exec = ExecutiveComponent::new_at(StaticExec(top), at)?;
                Ok(Box::new(NetworkComponent::new(
                    Box::new(exec),
                    Arc::new(Factory),
                    at,
                )?))
            }
            other => Err(KernelError::UnknownModel {
                path: String::new(),
                model: other.into(),
            }),
        }
    }
}

pub fn network(top: Topology) -> NetworkComponent {
    let exec = ExecutiveComponent::new(StaticExec(top)).unwrap();
    NetworkComponent::new(Box::new(exec), Arc::new(Factory), HyTime::ZERO)
        .unwrap()
        .with_path("net")
}

pub fn switch_network(switch_after: i64) -> NetworkComponent {
    let exec = ExecutiveComponent::new(SwitchExec {
        period: 1.0,
        switch_after,
    })
    .unwrap();
    NetworkComponent::new(Box::new(exec), Arc::new(Factory), HyTime::ZERO)
        .unwrap()
        .with_path("net")
}

pub fn names(v: &[ProcessName]) -> Vec<&str> {
    v.iter().map(ProcessName::as_str).collect()
}

pub fn btree(v: &[&str]) -> BTreeSet<String> {
    v.iter().map(|s| s.to_string()).collect()
}
