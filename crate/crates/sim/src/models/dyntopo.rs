//! A source whose events the executive reroutes from `sink-a` to `sink-b`.
//!
//! The source emits its pulse count every `period`. The executive's
//! `switcher` process counts along with the same period and flips the
//! routing once its clock reaches `switch-time`; when the switch time is
//! not a multiple of the period, the last step is shortened. Since the
//! executive transitions after the children, a pulse emitted at the
//! switch instant still follows the old route.

use std::sync::Arc;

use hysim_core::{
    BaseComponent, BaseModel, Component, ComponentFactory, Coupling, ExecutiveComponent,
    ExecutiveModel, FlowValue, HyTime, InputRejected, KernelError, NetworkComponent, ProcessModel,
    ProcessName, ProcessSet, Spawn, Topology, Value,
};

use crate::params::{ParamError, ParamSpec, Params};

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "switch-time",
        default: "10.0",
        doc: "time at which the executive reroutes the source",
    },
    ParamSpec {
        name: "period",
        default: "1.0",
        doc: "pulse period of the source",
    },
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyntopoParams {
    pub switch_time: f64,
    pub period: f64,
}

impl Default for DyntopoParams {
    fn default() -> Self {
        DyntopoParams {
            switch_time: 10.0,
            period: 1.0,
        }
    }
}

impl DyntopoParams {
    pub fn from_params(p: &Params) -> Result<Self, ParamError> {
        Ok(DyntopoParams {
            switch_time: p.positive("switch-time")?,
            period: p.positive("period")?,
        })
    }
}

pub struct Pulse {
    period: f64,
}

impl ProcessModel<()> for Pulse {
    type State = i64;
    type Index = ();

    fn index(&self, _p: &i64) {}

    fn time_to_input(&self, _i: (), _p: &i64) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, _i: (), _p: &i64) -> HyTime {
        HyTime::from_real(self.period)
    }

    fn transition(&self, _i: (), count: &mut i64, _e: HyTime, _s: &mut ()) {
        *count += 1;
    }

    fn continuous_output(&self, _i: (), count: &i64, _e: HyTime, _s: &()) -> Value {
        Value::Int(*count)
    }

    fn discrete_output(&self, _i: (), count: &i64, _s: &()) -> Value {
        Value::Int(*count + 1)
    }

    fn describe(&self, count: &i64) -> Value {
        Value::Int(*count)
    }
}

pub struct Source {
    period: f64,
}

impl BaseModel for Source {
    type State = ();

    fn initial_state(&self) {}

    fn processes(&self, _p: &()) -> ProcessSet {
        [ProcessName::fixed("pulse")].into_iter().collect()
    }

    fn spawn(&self, _n: &ProcessName, _p: &()) -> Option<Spawn<()>> {
        Some(Spawn::new(
            Pulse {
                period: self.period,
            },
            0,
        ))
    }

    fn output(&self, _p: &(), outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        outputs[0].1.clone()
    }
}

/// Records every event it receives.
pub struct Collector;

impl BaseModel for Collector {
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

    fn describe(&self, p: &Vec<Value>) -> Value {
        Value::List(p.clone())
    }
}

/// Shared p-state of the executive.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Routing {
    pub switched: bool,
}

pub struct Switcher {
    params: DyntopoParams,
}

impl ProcessModel<Routing> for Switcher {
    /// Real time of the last step.
    type State = f64;
    type Index = bool;

    fn index(&self, clock: &f64) -> bool {
        *clock < self.params.switch_time
    }

    fn time_to_input(&self, _i: bool, _p: &f64) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, counting: bool, clock: &f64) -> HyTime {
        if counting {
            HyTime::from_real(self.params.period.min(self.params.switch_time - clock))
        } else {
            HyTime::INFINITY
        }
    }

    fn transition(&self, _i: bool, clock: &mut f64, _e: HyTime, s: &mut Routing) {
        let step = self.params.period.min(self.params.switch_time - *clock);
        *clock += step;
        if *clock >= self.params.switch_time {
            // exact arrival is not guaranteed when the last step is shortened
            *clock = self.params.switch_time;
            s.switched = true;
        }
    }

    fn discrete_output(&self, _i: bool, _p: &f64, _s: &Routing) -> Value {
        Value::Unit
    }

    fn describe(&self, clock: &f64) -> Value {
        Value::Real(*clock)
    }
}

pub struct Router {
    params: DyntopoParams,
}

impl BaseModel for Router {
    type State = Routing;

    fn initial_state(&self) -> Routing {
        Routing::default()
    }

    fn processes(&self, _p: &Routing) -> ProcessSet {
        [ProcessName::fixed("switcher")].into_iter().collect()
    }

    fn spawn(&self, _n: &ProcessName, _p: &Routing) -> Option<Spawn<Routing>> {
        Some(Spawn::new(
            Switcher {
                params: self.params,
            },
            0.0,
        ))
    }

    fn output(&self, _p: &Routing, _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        FlowValue::null()
    }

    fn describe(&self, p: &Routing) -> Value {
        Value::record([("switched", Value::Bool(p.switched))])
    }
}

impl ExecutiveModel for Router {
    fn topology(&self, p: &Routing) -> Topology {
        let target = if p.switched { "sink-b" } else { "sink-a" };
        Topology::new()
            .component("source", "source")
            .component("sink-a", "collector")
            .component("sink-b", "collector")
            .input(target, &["source"], Coupling::first())
            .output(&["source"], Coupling::first())
    }
}

pub struct DyntopoFactory(pub DyntopoParams);

impl ComponentFactory for DyntopoFactory {
    fn build(&self, model: &str, at: HyTime) -> Result<Box<dyn Component>, KernelError> {
        match model {
            "source" => Ok(Box::new(BaseComponent::new_at(
                Source {
                    period: self.0.period,
                },
                at,
            )?)),
            "collector" => Ok(Box::new(BaseComponent::new_at(Collector, at)?)),
            other => Err(KernelError::UnknownModel {
                path: String::new(),
                model: other.into(),
            }),
        }
    }
}

pub fn build(params: DyntopoParams) -> Result<NetworkComponent, KernelError> {
    let exec = ExecutiveComponent::new(Router { params })?;
    Ok(NetworkComponent::new(
        Box::new(exec),
        Arc::new(DyntopoFactory(params)),
        HyTime::ZERO,
    )?
    .with_path("dyntopo"))
}

/// Events received so far by `sink-a` or `sink-b`.
pub fn received<'a>(net: &'a NetworkComponent, sink: &str) -> Option<&'a [Value]> {
    net.child(sink)?
        .as_any()
        .downcast_ref::<BaseComponent<Collector>>()
        .map(|c| c.shared().as_slice())
}
