//! Active clients: every client is a process, created on arrival and
//! destroyed on departure, so the live process count is the number of
//! clients in the system plus the generator.
//!
//! The generator adds client names to the shared `live` set; the base
//! component then creates their simulators. A new client first schedules a
//! zero-delay step to enter the FIFO, then waits on "a server is free and I
//! am at the head of the FIFO", holds the server for its service time and
//! finally removes itself from `live`.

use std::collections::VecDeque;

use hysim_core::{
    BaseComponent, BaseModel, FlowValue, HyTime, KernelError, ProcessModel, ProcessName,
    ProcessSet, Spawn, Value,
};

use crate::models::mm2::Dist;
use crate::params::{ParamError, ParamSpec, Params};
use crate::rng::ProcessRng;

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "arrivals",
        default: "",
        doc: "comma-separated arrival times; overrides rate/count",
    },
    ParamSpec {
        name: "rate",
        default: "0.5",
        doc: "exponential arrival rate when no arrival list is given",
    },
    ParamSpec {
        name: "count",
        default: "",
        doc: "number of random arrivals (unset: unbounded)",
    },
    ParamSpec {
        name: "service",
        default: "2.0",
        doc: "mean service time",
    },
    ParamSpec {
        name: "service-dist",
        default: "fixed",
        doc: "fixed|exp",
    },
    ParamSpec {
        name: "servers",
        default: "1",
        doc: "number of identical servers",
    },
];

pub const GENERATOR: ProcessName = ProcessName::fixed("generator");

#[derive(Clone, Debug, PartialEq)]
pub enum Arrivals {
    /// Absolute arrival times, nondecreasing.
    Listed(Vec<f64>),
    Random {
        rate: f64,
        count: Option<u64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActiveClientParams {
    pub arrivals: Arrivals,
    pub service: f64,
    pub service_dist: Dist,
    pub servers: u32,
}

impl ActiveClientParams {
    pub fn from_params(p: &Params) -> Result<Self, ParamError> {
        let arrivals = if p.is_set("arrivals") {
            let times = p.reals("arrivals")?;
            if times.iter().any(|t| *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
                return Err(ParamError::Invalid {
                    name: "arrivals".into(),
                    value: p.text("arrivals").into(),
                    reason: "times must be >= 0 and nondecreasing".into(),
                });
            }
            Arrivals::Listed(times)
        } else {
            Arrivals::Random {
                rate: p.positive("rate")?,
                count: p.opt("count")?,
            }
        };
        let servers: u32 = p.get("servers")?;
        if servers == 0 {
            return Err(ParamError::Invalid {
                name: "servers".into(),
                value: "0".into(),
                reason: "need at least one server".into(),
            });
        }
        Ok(ActiveClientParams {
            arrivals,
            service: p.positive("service")?,
            service_dist: match p.choice("service-dist", &["fixed", "exp"])? {
                "exp" => Dist::Exponential,
                _ => Dist::Fixed,
            },
            servers,
        })
    }
}

pub fn client_name(id: u64) -> ProcessName {
    ProcessName::new(format!("client-{id:06}"))
}

/// Shared p-state.
#[derive(Clone, Debug, Default)]
pub struct Shop {
    pub live: ProcessSet,
    pub fifo: VecDeque<u64>,
    pub free: u32,
    pub next_id: u64,
    pub departures: u64,
}

impl Shop {
    /// Clients currently in the system.
    pub fn occupancy(&self) -> usize {
        self.live.len() - usize::from(self.live.contains(&GENERATOR))
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorState {
    rng: ProcessRng,
    clock: f64,
    /// Delay from `clock` to the next arrival instant, if any.
    gap: Option<f64>,
    /// Remaining listed times.
    listed: VecDeque<f64>,
    remaining: Option<u64>,
}

pub struct Generator {
    random_rate: Option<f64>,
}

impl Generator {
    fn schedule(&self, p: &mut GeneratorState) {
        p.gap = match self.random_rate {
            Some(rate) if p.remaining != Some(0) => Some(p.rng.exponential(rate)),
            Some(_) => None,
            None => p.listed.front().map(|t| t - p.clock),
        };
    }
}

impl ProcessModel<Shop> for Generator {
    type State = GeneratorState;
    type Index = bool;

    fn index(&self, p: &GeneratorState) -> bool {
        p.gap.is_some()
    }

    fn time_to_input(&self, _i: bool, _p: &GeneratorState) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, _i: bool, p: &GeneratorState) -> HyTime {
        p.gap.map_or(HyTime::INFINITY, HyTime::from_real)
    }

    /// Admits every client due at this instant.
    fn transition(&self, _i: bool, p: &mut GeneratorState, _e: HyTime, s: &mut Shop) {
        let gap = p.gap.expect("active generator");
        // listed times are taken verbatim so that `<=` below cannot miss
        p.clock = p.listed.front().copied().unwrap_or(p.clock + gap);
        let admit = |s: &mut Shop| {
            s.live.insert(client_name(s.next_id));
            s.next_id += 1;
        };
        if self.random_rate.is_some() {
            admit(s);
            if let Some(n) = p.remaining.as_mut() {
                *n -= 1;
            }
        } else {
            while p.listed.front().is_some_and(|t| *t <= p.clock) {
                p.listed.pop_front();
                admit(s);
            }
        }
        self.schedule(p);
    }

    fn discrete_output(&self, _i: bool, p: &GeneratorState, _s: &Shop) -> Value {
        Value::Real(p.clock + p.gap.unwrap_or(0.0))
    }

    fn describe(&self, p: &GeneratorState) -> Value {
        Value::record([
            ("clock", Value::Real(p.clock)),
            (
                "next",
                p.gap.map_or(Value::Unit, |g| Value::Real(p.clock + g)),
            ),
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Entering,
    Waiting,
    InService,
    Gone,
}

#[derive(Clone, Debug)]
pub struct ClientState {
    id: u64,
    stage: Stage,
    service: f64,
}

pub struct ActiveClient;

impl ProcessModel<Shop> for ActiveClient {
    type State = ClientState;
    type Index = Stage;

    fn index(&self, p: &ClientState) -> Stage {
        p.stage
    }

    fn time_to_input(&self, _i: Stage, _p: &ClientState) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, i: Stage, p: &ClientState) -> HyTime {
        match i {
            Stage::Entering => HyTime::ZERO,
            Stage::InService => HyTime::from_real(p.service),
            Stage::Waiting | Stage::Gone => HyTime::INFINITY,
        }
    }

    fn condition(&self, i: Stage, p: &ClientState, s: &Shop) -> bool {
        i == Stage::Waiting && s.free > 0 && s.fifo.front() == Some(&p.id)
    }

    fn transition(&self, i: Stage, p: &mut ClientState, _e: HyTime, s: &mut Shop) {
        p.stage = match i {
            Stage::Entering => {
                s.fifo.push_back(p.id);
                Stage::Waiting
            }
            Stage::Waiting => {
                s.fifo.pop_front();
                s.free -= 1;
                Stage::InService
            }
            Stage::InService => {
                s.free += 1;
                s.departures += 1;
                s.live.remove(&client_name(p.id));
                Stage::Gone
            }
            Stage::Gone => unreachable!("a departed client is removed"),
        };
    }

    fn discrete_output(&self, i: Stage, p: &ClientState, _s: &Shop) -> Value {
        match i {
            Stage::InService => Value::record([("departure", Value::Int(p.id as i64))]),
            _ => Value::record([("entry", Value::Int(p.id as i64))]),
        }
    }

    fn describe(&self, p: &ClientState) -> Value {
        let stage = match p.stage {
            Stage::Entering => "entering",
            Stage::Waiting => "waiting",
            Stage::InService => "in-service",
            Stage::Gone => "gone",
        };
        Value::record([
            ("id", Value::Int(p.id as i64)),
            ("stage", Value::text(stage)),
        ])
    }
}

pub struct ActiveClientModel {
    params: ActiveClientParams,
    seed: u64,
}

impl ActiveClientModel {
    pub fn new(params: ActiveClientParams, seed: u64) -> Self {
        ActiveClientModel { params, seed }
    }
}

impl BaseModel for ActiveClientModel {
    type State = Shop;

    fn initial_state(&self) -> Shop {
        Shop {
            live: [GENERATOR].into_iter().collect(),
            free: self.params.servers,
            ..Shop::default()
        }
    }

    fn processes(&self, p: &Shop) -> ProcessSet {
        p.live.clone()
    }

    fn spawn(&self, name: &ProcessName, p: &Shop) -> Option<Spawn<Shop>> {
        let mut rng = ProcessRng::new(self.seed, name.as_str());
        if *name == GENERATOR {
            let (listed, random_rate, remaining) = match &self.params.arrivals {
                Arrivals::Listed(times) => (times.iter().copied().collect(), None, None),
                Arrivals::Random { rate, count } => (VecDeque::new(), Some(*rate), *count),
            };
            let generator = Generator { random_rate };
            let mut state = GeneratorState {
                rng,
                clock: 0.0,
                gap: None,
                listed,
                remaining,
            };
            generator.schedule(&mut state);
            return Some(Spawn::new(generator, state));
        }
        let id = name.as_str().strip_prefix("client-")?.parse().ok()?;
        if id >= p.next_id {
            return None;
        }
        let service = match self.params.service_dist {
            Dist::Fixed => self.params.service,
            Dist::Exponential => rng.exponential(1.0 / self.params.service),
        };
        Some(Spawn::new(
            ActiveClient,
            ClientState {
                id,
                stage: Stage::Entering,
                service,
            },
        ))
    }

    /// Continuous: clients in the system. Discrete: the departures of this
    /// instant.
    fn output(&self, p: &Shop, outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        let departures: Vec<Value> = outputs
            .iter()
            .filter_map(|(_, v)| v.discrete.as_ref()?.get("departure").cloned())
            .collect();
        FlowValue::new(
            Value::Int(p.occupancy() as i64),
            (!departures.is_empty()).then_some(Value::List(departures)),
        )
    }

    fn describe(&self, p: &Shop) -> Value {
        Value::record([
            ("in-system", Value::Int(p.occupancy() as i64)),
            (
                "fifo",
                Value::List(p.fifo.iter().map(|id| Value::Int(*id as i64)).collect()),
            ),
            ("free", Value::Int(p.free as i64)),
        ])
    }
}

pub fn build(
    params: ActiveClientParams,
    seed: u64,
) -> Result<BaseComponent<ActiveClientModel>, KernelError> {
    Ok(BaseComponent::new(ActiveClientModel::new(params, seed))?.with_path("active-client"))
}
