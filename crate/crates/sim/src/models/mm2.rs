//! One FIFO queue feeding two servers.
//!
//! A `generator` process pushes clients into the shared queue. The servers
//! `server-a` and `server-b` wait on the condition "idle and the queue is
//! not empty", so an arrival that finds an idle server starts service in
//! the same instant. A server that finishes with clients still queued takes
//! the next one in its own transition.
//!
//! Every process keeps its own real clock by adding up the delays it was
//! scheduled with. Since each scheduled transition lands at `t_last + ω`,
//! that sum reproduces the real part of the simulation time exactly.

use std::collections::VecDeque;

use hysim_core::{
    BaseComponent, BaseModel, FlowValue, HyTime, KernelError, ProcessModel, ProcessName,
    ProcessSet, Spawn, Value,
};

use crate::params::{ParamError, ParamSpec, Params};
use crate::rng::ProcessRng;

pub const PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "lambda",
        default: "1.0",
        doc: "arrival rate",
    },
    ParamSpec {
        name: "mu",
        default: "0.75",
        doc: "service rate of each server",
    },
    ParamSpec {
        name: "dist",
        default: "exp",
        doc: "exp: exponential delays, fixed: constant 1/lambda and 1/mu",
    },
    ParamSpec {
        name: "arrivals",
        default: "",
        doc: "stop after this many arrivals (unset: unbounded)",
    },
];

pub const GENERATOR: ProcessName = ProcessName::fixed("generator");
pub const SERVERS: [ProcessName; 2] = [
    ProcessName::fixed("server-a"),
    ProcessName::fixed("server-b"),
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dist {
    Exponential,
    Fixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mm2Params {
    pub lambda: f64,
    pub mu: f64,
    pub dist: Dist,
    pub max_arrivals: Option<u64>,
}

impl Mm2Params {
    pub fn from_params(p: &Params) -> Result<Self, ParamError> {
        Ok(Mm2Params {
            lambda: p.positive("lambda")?,
            mu: p.positive("mu")?,
            dist: match p.choice("dist", &["exp", "fixed"])? {
                "exp" => Dist::Exponential,
                _ => Dist::Fixed,
            },
            max_arrivals: p.opt("arrivals")?,
        })
    }
}

impl Default for Mm2Params {
    fn default() -> Self {
        Mm2Params {
            lambda: 1.0,
            mu: 0.75,
            dist: Dist::Exponential,
            max_arrivals: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Client {
    pub id: u64,
    pub arrived: f64,
}

/// Shared p-state.
#[derive(Clone, Debug, Default)]
pub struct Mm2State {
    pub queue: VecDeque<Client>,
    /// Real time of the latest arrival, read by idle servers that pick it up.
    pub now: f64,
    pub arrivals: u64,
    pub served: u64,
    pub departures: u64,
    pub wait_sum: f64,
}

impl Mm2State {
    /// Mean time spent in queue by the clients that started service.
    pub fn mean_wait(&self) -> Option<f64> {
        (self.served > 0).then(|| self.wait_sum / self.served as f64)
    }

    fn start_service(&mut self, now: f64) -> Option<Client> {
        let client = self.queue.pop_front()?;
        self.wait_sum += now - client.arrived;
        self.served += 1;
        Some(client)
    }
}

fn draw(rng: &mut ProcessRng, dist: Dist, rate: f64) -> f64 {
    match dist {
        Dist::Exponential => rng.exponential(rate),
        Dist::Fixed => 1.0 / rate,
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorState {
    rng: ProcessRng,
    clock: f64,
    gap: f64,
    remaining: Option<u64>,
}

pub struct Generator {
    lambda: f64,
    dist: Dist,
}

impl ProcessModel<Mm2State> for Generator {
    type State = GeneratorState;
    type Index = bool;

    fn index(&self, p: &GeneratorState) -> bool {
        p.remaining != Some(0)
    }

    fn time_to_input(&self, _i: bool, _p: &GeneratorState) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, active: bool, p: &GeneratorState) -> HyTime {
        if active {
            HyTime::from_real(p.gap)
        } else {
            HyTime::INFINITY
        }
    }

    fn transition(&self, _i: bool, p: &mut GeneratorState, _e: HyTime, s: &mut Mm2State) {
        p.clock += p.gap;
        s.now = p.clock;
        s.queue.push_back(Client {
            id: s.arrivals,
            arrived: p.clock,
        });
        s.arrivals += 1;
        if let Some(n) = p.remaining.as_mut() {
            *n -= 1;
        }
        p.gap = draw(&mut p.rng, self.dist, self.lambda);
    }

    fn discrete_output(&self, _i: bool, _p: &GeneratorState, s: &Mm2State) -> Value {
        Value::Int(s.arrivals as i64)
    }

    fn describe(&self, p: &GeneratorState) -> Value {
        Value::record([("clock", Value::Real(p.clock)), ("gap", Value::Real(p.gap))])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Idle,
    Busy,
}

#[derive(Clone, Debug)]
pub struct ServerState {
    rng: ProcessRng,
    clock: f64,
    client: Option<Client>,
    service: f64,
}

impl ServerState {
    fn begin(&mut self, client: Option<Client>, mu: f64, dist: Dist) {
        self.client = client;
        if client.is_some() {
            self.service = draw(&mut self.rng, dist, mu);
        }
    }
}

pub struct Server {
    mu: f64,
    dist: Dist,
}

impl ProcessModel<Mm2State> for Server {
    type State = ServerState;
    type Index = Phase;

    fn index(&self, p: &ServerState) -> Phase {
        if p.client.is_some() {
            Phase::Busy
        } else {
            Phase::Idle
        }
    }

    fn time_to_input(&self, _i: Phase, _p: &ServerState) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, i: Phase, p: &ServerState) -> HyTime {
        match i {
            Phase::Busy => HyTime::from_real(p.service),
            Phase::Idle => HyTime::INFINITY,
        }
    }

    fn condition(&self, i: Phase, _p: &ServerState, s: &Mm2State) -> bool {
        i == Phase::Idle && !s.queue.is_empty()
    }

    fn transition(&self, i: Phase, p: &mut ServerState, _e: HyTime, s: &mut Mm2State) {
        match i {
            Phase::Idle => {
                // only an arrival in this instant can make the queue non-empty
                p.clock = s.now;
            }
            Phase::Busy => {
                p.clock += p.service;
                s.departures += 1;
            }
        }
        let next = s.start_service(p.clock);
        p.begin(next, self.mu, self.dist);
    }

    fn continuous_output(&self, i: Phase, _p: &ServerState, _e: HyTime, _s: &Mm2State) -> Value {
        Value::Bool(i == Phase::Busy)
    }

    fn discrete_output(&self, _i: Phase, p: &ServerState, _s: &Mm2State) -> Value {
        Value::Int(p.client.map_or(-1, |c| c.id as i64))
    }

    fn describe(&self, p: &ServerState) -> Value {
        Value::record([
            ("clock", Value::Real(p.clock)),
            (
                "client",
                p.client.map_or(Value::Unit, |c| Value::Int(c.id as i64)),
            ),
            (
                "service",
                Value::Real(if p.client.is_some() { p.service } else { 0.0 }),
            ),
        ])
    }
}

pub struct Mm2 {
    params: Mm2Params,
    seed: u64,
}

impl Mm2 {
    pub fn new(params: Mm2Params, seed: u64) -> Self {
        Mm2 { params, seed }
    }
}

impl BaseModel for Mm2 {
    type State = Mm2State;

    fn initial_state(&self) -> Mm2State {
        Mm2State::default()
    }

    fn processes(&self, _p: &Mm2State) -> ProcessSet {
        [GENERATOR, SERVERS[0].clone(), SERVERS[1].clone()]
            .into_iter()
            .collect()
    }

    fn spawn(&self, name: &ProcessName, _p: &Mm2State) -> Option<Spawn<Mm2State>> {
        let mut rng = ProcessRng::new(self.seed, name.as_str());
        let Mm2Params {
            lambda,
            mu,
            dist,
            max_arrivals,
        } = self.params.clone();
        if *name == GENERATOR {
            let gap = draw(&mut rng, dist, lambda);
            return Some(Spawn::new(
                Generator { lambda, dist },
                GeneratorState {
                    rng,
                    clock: 0.0,
                    gap,
                    remaining: max_arrivals,
                },
            ));
        }
        SERVERS.contains(name).then(|| {
            Spawn::new(
                Server { mu, dist },
                ServerState {
                    rng,
                    clock: 0.0,
                    client: None,
                    service: 0.0,
                },
            )
        })
    }

    /// Continuous: queue length and busy servers. Discrete: arrivals and
    /// departures of this instant, by client id.
    fn output(&self, p: &Mm2State, outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        let mut busy = 0;
        let mut arrivals = Vec::new();
        let mut departures = Vec::new();
        for (name, v) in outputs {
            if **name == GENERATOR {
                if let Some(d) = &v.discrete {
                    arrivals.push(d.clone());
                }
            } else {
                busy += i64::from(v.continuous == Value::Bool(true));
                if let Some(d) = &v.discrete {
                    departures.push(d.clone());
                }
            }
        }
        let continuous = Value::record([
            ("queue", Value::Int(p.queue.len() as i64)),
            ("busy", Value::Int(busy)),
        ]);
        let discrete = (!arrivals.is_empty() || !departures.is_empty()).then(|| {
            Value::record([
                ("arrivals", Value::List(arrivals)),
                ("departures", Value::List(departures)),
            ])
        });
        FlowValue::new(continuous, discrete)
    }

    fn describe(&self, p: &Mm2State) -> Value {
        Value::record([
            (
                "queue",
                Value::List(p.queue.iter().map(|c| Value::Int(c.id as i64)).collect()),
            ),
            ("arrivals", Value::Int(p.arrivals as i64)),
            ("departures", Value::Int(p.departures as i64)),
        ])
    }
}

pub fn build(params: Mm2Params, seed: u64) -> Result<BaseComponent<Mm2>, KernelError> {
    if params.lambda >= 2.0 * params.mu {
        log::warn!(
            "mm2: lambda {} >= 2 mu {}; the queue grows without bound",
            params.lambda,
            2.0 * params.mu
        );
    }
    Ok(BaseComponent::new(Mm2::new(params, seed))?.with_path("mm2"))
}
