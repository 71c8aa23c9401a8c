//! Small models with hand-checkable behavior, used by the test suites.

use hysim_core::{
    BaseComponent, BaseModel, FlowValue, HyTime, KernelError, ProcessModel, ProcessName,
    ProcessSet, Spawn, Value,
};

/// Emits `"fire"` every `period`; continuous output is the elapsed time.
#[derive(Clone, Copy, Debug)]
pub struct Timer {
    pub period: HyTime,
}

impl<S> ProcessModel<S> for Timer {
    type State = u64;
    type Index = ();

    fn index(&self, _p: &u64) {}

    fn time_to_input(&self, _i: (), _p: &u64) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, _i: (), _p: &u64) -> HyTime {
        self.period
    }

    fn transition(&self, _i: (), fired: &mut u64, _e: HyTime, _s: &mut S) {
        *fired += 1;
    }

    fn continuous_output(&self, _i: (), _p: &u64, e: HyTime, _s: &S) -> Value {
        Value::Real(e.real())
    }

    fn discrete_output(&self, _i: (), _p: &u64, _s: &S) -> Value {
        Value::text("fire")
    }
}

pub struct TimerBase {
    pub period: f64,
}

impl BaseModel for TimerBase {
    type State = ();

    fn initial_state(&self) {}

    fn processes(&self, _p: &()) -> ProcessSet {
        [ProcessName::fixed("timer")].into_iter().collect()
    }

    fn spawn(&self, _n: &ProcessName, _p: &()) -> Option<Spawn<()>> {
        Some(Spawn::new(
            Timer {
                period: HyTime::from_real(self.period),
            },
            0,
        ))
    }

    fn output(&self, _p: &(), outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        outputs[0].1.clone()
    }
}

pub fn timer(period: f64) -> Result<BaseComponent<TimerBase>, KernelError> {
    Ok(BaseComponent::new(TimerBase { period })?.with_path("timer"))
}

/// Flags passed between the two handshake processes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Flags {
    pub b_ready: bool,
    pub a_ready: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Start,
    Armed,
    Done,
}

/// At `at`, enables `b`; then waits for `b` to enable it back.
pub struct Initiator {
    at: f64,
}

impl ProcessModel<Flags> for Initiator {
    type State = Step;
    type Index = Step;

    fn index(&self, p: &Step) -> Step {
        *p
    }

    fn time_to_input(&self, _i: Step, _p: &Step) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, i: Step, _p: &Step) -> HyTime {
        match i {
            Step::Start => HyTime::from_real(self.at),
            _ => HyTime::INFINITY,
        }
    }

    fn condition(&self, i: Step, _p: &Step, s: &Flags) -> bool {
        i == Step::Armed && s.a_ready
    }

    fn transition(&self, i: Step, p: &mut Step, _e: HyTime, s: &mut Flags) {
        *p = match i {
            Step::Start => {
                s.b_ready = true;
                Step::Armed
            }
            Step::Armed => {
                s.a_ready = false;
                Step::Done
            }
            Step::Done => Step::Done,
        };
    }

    fn discrete_output(&self, _i: Step, _p: &Step, _s: &Flags) -> Value {
        Value::text("start")
    }
}

/// Answers every enable from `a` by enabling `a`.
pub struct Responder;

impl ProcessModel<Flags> for Responder {
    type State = u32;
    type Index = ();

    fn index(&self, _p: &u32) {}

    fn time_to_input(&self, _i: (), _p: &u32) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, _i: (), _p: &u32) -> HyTime {
        HyTime::INFINITY
    }

    fn condition(&self, _i: (), _p: &u32, s: &Flags) -> bool {
        s.b_ready
    }

    fn transition(&self, _i: (), answered: &mut u32, _e: HyTime, s: &mut Flags) {
        s.b_ready = false;
        s.a_ready = true;
        *answered += 1;
    }

    fn discrete_output(&self, _i: (), _p: &u32, _s: &Flags) -> Value {
        Value::Unit
    }
}

/// Processes `a` (an [`Initiator`] firing at `at`) and `b` (a [`Responder`]).
pub struct Handshake {
    pub at: f64,
}

impl BaseModel for Handshake {
    type State = Flags;

    fn initial_state(&self) -> Flags {
        Flags::default()
    }

    fn processes(&self, _p: &Flags) -> ProcessSet {
        [ProcessName::fixed("a"), ProcessName::fixed("b")]
            .into_iter()
            .collect()
    }

    fn spawn(&self, name: &ProcessName, _p: &Flags) -> Option<Spawn<Flags>> {
        match name.as_str() {
            "a" => Some(Spawn::new(Initiator { at: self.at }, Step::Start)),
            "b" => Some(Spawn::new(Responder, 0)),
            _ => None,
        }
    }

    fn output(&self, _p: &Flags, outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        outputs[0].1.clone()
    }

    fn describe(&self, p: &Flags) -> Value {
        Value::record([
            ("a_ready", Value::Bool(p.a_ready)),
            ("b_ready", Value::Bool(p.b_ready)),
        ])
    }
}

pub fn handshake(at: f64) -> Result<BaseComponent<Handshake>, KernelError> {
    Ok(BaseComponent::new(Handshake { at })?.with_path("handshake"))
}
