//! Asynchronous sampling of an exact continuous flow.
//!
//! `source` holds one passive process whose continuous output is
//! `f(t) = (start + t)²`, evaluated from the elapsed time alone. `sink`
//! holds two sampler processes with sampling periods `period-a` and
//! `period-b`. When a sampler is due the sink transitions, its input
//! function stores the current value of the source flow, and the sampler
//! copies that value into its own p-state.

use std::sync::Arc;

use hysim_core::{
    BaseComponent, BaseModel, Component, ComponentFactory, Coupling, ExecutiveComponent,
    ExecutiveModel, FlowValue, HyTime, InputRejected, KernelError, NetworkComponent, ProcessModel,
    ProcessName, ProcessSet, Spawn, Topology, Value,
};

use crate::params::{ParamError, ParamSpec, Params};

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "start",
        default: "0.0",
        doc: "offset s in f(t) = (s + t)^2",
    },
    ParamSpec {
        name: "period-a",
        default: "0.5",
        doc: "sampling period of sampler-a",
    },
    ParamSpec {
        name: "period-b",
        default: "0.7",
        doc: "sampling period of sampler-b",
    },
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingParams {
    pub start: f64,
    pub period_a: f64,
    pub period_b: f64,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            start: 0.0,
            period_a: 0.5,
            period_b: 0.7,
        }
    }
}

impl SamplingParams {
    pub fn from_params(p: &Params) -> Result<Self, ParamError> {
        let start: f64 = p.get("start")?;
        if !start.is_finite() {
            return Err(ParamError::Invalid {
                name: "start".into(),
                value: p.text("start").into(),
                reason: "must be finite".into(),
            });
        }
        Ok(SamplingParams {
            start,
            period_a: p.positive("period-a")?,
            period_b: p.positive("period-b")?,
        })
    }
}

/// The sampled flow.
pub fn flow(start: f64, t: f64) -> f64 {
    (start + t) * (start + t)
}

pub struct Parabola {
    start: f64,
}

impl ProcessModel<()> for Parabola {
    type State = ();
    type Index = ();

    fn index(&self, _p: &()) {}

    fn time_to_input(&self, _i: (), _p: &()) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, _i: (), _p: &()) -> HyTime {
        HyTime::INFINITY
    }

    fn transition(&self, _i: (), _p: &mut (), _e: HyTime, _s: &mut ()) {
        unreachable!("the source process is passive")
    }

    fn continuous_output(&self, _i: (), _p: &(), e: HyTime, _s: &()) -> Value {
        Value::Real(flow(self.start, e.real()))
    }

    fn discrete_output(&self, _i: (), _p: &(), _s: &()) -> Value {
        Value::Unit
    }
}

pub struct Source {
    start: f64,
}

impl BaseModel for Source {
    type State = ();

    fn initial_state(&self) {}

    fn processes(&self, _p: &()) -> ProcessSet {
        [ProcessName::fixed("flow")].into_iter().collect()
    }

    fn spawn(&self, _n: &ProcessName, _p: &()) -> Option<Spawn<()>> {
        Some(Spawn::new(Parabola { start: self.start }, ()))
    }

    fn output(&self, _p: &(), outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        outputs[0].1.clone()
    }
}

/// One stored reading.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    /// Real time of the reading, accumulated from the sampling period.
    pub at: f64,
    pub value: f64,
}

/// Shared p-state of the sink.
#[derive(Clone, Debug, Default)]
pub struct SinkState {
    /// Source value seen by the latest input.
    pub latest: f64,
    /// Every reading, in execution order.
    pub history: Vec<(ProcessName, Sample)>,
}

#[derive(Clone, Debug, Default)]
pub struct SamplerState {
    pub clock: f64,
    pub count: u64,
    pub last: Option<f64>,
}

pub struct Sampler {
    name: ProcessName,
    period: f64,
}

impl ProcessModel<SinkState> for Sampler {
    type State = SamplerState;
    type Index = ();

    fn index(&self, _p: &SamplerState) {}

    fn time_to_input(&self, _i: (), _p: &SamplerState) -> HyTime {
        HyTime::from_real(self.period)
    }

    fn time_to_output(&self, _i: (), _p: &SamplerState) -> HyTime {
        HyTime::INFINITY
    }

    fn transition(&self, _i: (), p: &mut SamplerState, _e: HyTime, s: &mut SinkState) {
        p.clock += self.period;
        p.count += 1;
        p.last = Some(s.latest);
        s.history.push((
            self.name.clone(),
            Sample {
                at: p.clock,
                value: s.latest,
            },
        ));
    }

    fn continuous_output(&self, _i: (), p: &SamplerState, _e: HyTime, _s: &SinkState) -> Value {
        p.last.map_or(Value::Unit, Value::Real)
    }

    fn discrete_output(&self, _i: (), _p: &SamplerState, _s: &SinkState) -> Value {
        Value::Unit
    }

    fn describe(&self, p: &SamplerState) -> Value {
        Value::record([
            ("clock", Value::Real(p.clock)),
            ("count", Value::Int(p.count as i64)),
            ("sample", p.last.map_or(Value::Unit, Value::Real)),
        ])
    }
}

pub struct Sink {
    period_a: f64,
    period_b: f64,
}

pub const SAMPLER_A: ProcessName = ProcessName::fixed("sampler-a");
pub const SAMPLER_B: ProcessName = ProcessName::fixed("sampler-b");

impl BaseModel for Sink {
    type State = SinkState;

    fn initial_state(&self) -> SinkState {
        SinkState::default()
    }

    fn input(&self, p: &mut SinkState, x: &FlowValue) -> Result<(), InputRejected> {
        p.latest = x.continuous.as_real().ok_or_else(|| {
            InputRejected::from(format!("expected a real flow, got {:?}", x.continuous))
        })?;
        Ok(())
    }

    fn processes(&self, _p: &SinkState) -> ProcessSet {
        [SAMPLER_A, SAMPLER_B].into_iter().collect()
    }

    fn spawn(&self, name: &ProcessName, _p: &SinkState) -> Option<Spawn<SinkState>> {
        let period = match name.as_str() {
            "sampler-a" => self.period_a,
            "sampler-b" => self.period_b,
            _ => return None,
        };
        Some(Spawn::new(
            Sampler {
                name: name.clone(),
                period,
            },
            SamplerState::default(),
        ))
    }

    /// Continuous: `[last of sampler-a, last of sampler-b]`.
    fn output(&self, _p: &SinkState, outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        FlowValue::continuous(Value::List(
            outputs.iter().map(|(_, v)| v.continuous.clone()).collect(),
        ))
    }

    fn describe(&self, p: &SinkState) -> Value {
        Value::record([("latest", Value::Real(p.latest))])
    }
}

struct Layout;

impl BaseModel for Layout {
    type State = ();

    fn initial_state(&self) {}

    fn processes(&self, _p: &()) -> ProcessSet {
        ProcessSet::new()
    }

    fn spawn(&self, _n: &ProcessName, _p: &()) -> Option<Spawn<()>> {
        None
    }

    fn output(&self, _p: &(), _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        FlowValue::null()
    }
}

impl ExecutiveModel for Layout {
    fn topology(&self, _p: &()) -> Topology {
        Topology::new()
            .component("source", "source")
            .component("sink", "sink")
            .input("sink", &["source"], Coupling::first())
            .output(&["sink"], Coupling::first())
    }
}

pub struct SamplingFactory(pub SamplingParams);

impl ComponentFactory for SamplingFactory {
    fn build(&self, model: &str, at: HyTime) -> Result<Box<dyn Component>, KernelError> {
        let SamplingParams {
            start,
            period_a,
            period_b,
        } = self.0;
        match model {
            "source" => Ok(Box::new(BaseComponent::new_at(Source { start }, at)?)),
            "sink" => Ok(Box::new(BaseComponent::new_at(
                Sink { period_a, period_b },
                at,
            )?)),
            other => Err(KernelError::UnknownModel {
                path: String::new(),
                model: other.into(),
            }),
        }
    }
}

pub fn build(params: SamplingParams) -> Result<NetworkComponent, KernelError> {
    let exec = ExecutiveComponent::new(Layout)?;
    Ok(NetworkComponent::new(
        Box::new(exec),
        Arc::new(SamplingFactory(params)),
        HyTime::ZERO,
    )?
    .with_path("sampling-demo"))
}

/// The sink's shared p-state inside a built network.
pub fn sink_state(net: &NetworkComponent) -> Option<&SinkState> {
    net.child("sink")?
        .as_any()
        .downcast_ref::<BaseComponent<Sink>>()
        .map(BaseComponent::shared)
}
