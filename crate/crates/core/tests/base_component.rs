mod common;

use std::collections::BTreeSet;

use common::*;
use hysim_core::*;

#[derive(Clone, Debug, Default)]
struct Handshake {
    b_ready: bool,
    a_ready: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum AState {
    Waiting,
    Armed,
    Done,
}

/// Fires at 1.0, enables B, then waits to be re-enabled by B exactly once.
struct ProcA;

impl ProcessModel<Handshake> for ProcA {
    type State = AState;
    type Index = AState;

    fn index(&self, p: &AState) -> AState {
        *p
    }

    fn time_to_input(&self, _i: AState, _p: &AState) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, i: AState, _p: &AState) -> HyTime {
        match i {
            AState::Waiting => HyTime::from_real(1.0),
            _ => HyTime::INFINITY,
        }
    }

    fn condition(&self, i: AState, _p: &AState, s: &Handshake) -> bool {
        i == AState::Armed && s.a_ready
    }

    fn transition(&self, i: AState, p: &mut AState, _e: HyTime, s: &mut Handshake) {
        match i {
            AState::Waiting => {
                s.b_ready = true;
                *p = AState::Armed;
            }
            AState::Armed => {
                s.a_ready = false;
                *p = AState::Done;
            }
            AState::Done => unreachable!("done is passive with a false condition"),
        }
    }

    fn discrete_output(&self, _i: AState, _p: &AState, _s: &Handshake) -> Value {
        Value::text("a")
    }
}

struct ProcB;

impl ProcessModel<Handshake> for ProcB {
    type State = u32;
    type Index = ();

    fn index(&self, _p: &u32) {}

    fn time_to_input(&self, _i: (), _p: &u32) -> HyTime {
        HyTime::INFINITY
    }

    fn time_to_output(&self, _i: (), _p: &u32) -> HyTime {
        HyTime::INFINITY
    }

    fn condition(&self, _i: (), _p: &u32, s: &Handshake) -> bool {
        s.b_ready
    }

    fn transition(&self, _i: (), p: &mut u32, _e: HyTime, s: &mut Handshake) {
        s.b_ready = false;
        s.a_ready = true;
        *p += 1;
    }

    fn discrete_output(&self, _i: (), _p: &u32, _s: &Handshake) -> Value {
        Value::Unit
    }
}

struct HandshakeBase;

impl BaseModel for HandshakeBase {
    type State = Handshake;

    fn initial_state(&self) -> Handshake {
        Handshake::default()
    }

    fn processes(&self, _p: &Handshake) -> ProcessSet {
        set(&["a", "b"])
    }

    fn spawn(&self, name: &ProcessName, _p: &Handshake) -> Option<Spawn<Handshake>> {
        match name.as_str() {
            "a" => Some(Spawn::new(ProcA, AState::Waiting)),
            "b" => Some(Spawn::new(ProcB, 0)),
            _ => None,
        }
    }

    fn output(&self, _p: &Handshake, outputs: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        outputs[0].1.clone()
    }
}

fn step<C: Component>(c: &mut C, t: HyTime, sink: &mut VecSink) {
    let mut ctx = Context::new(sink);
    c.output(t, &mut ctx).unwrap();
    c.transition(t, &FlowValue::null(), &mut ctx).unwrap();
}

#[test]
fn handshake_runs_two_conditional_reactivations() {
    let mut c = BaseComponent::new(HandshakeBase).unwrap().with_path("hs");
    let t1 = c.next_time();
    assert_eq!(t1, t(1.0, 1));
    let mut sink = VecSink::new();
    step(&mut c, t1, &mut sink);

    let report = c.last_report().unwrap();
    assert_eq!(names(&report.scheduled), ["a"]);
    assert_eq!(names(&report.conditional), ["b", "a"]);
    assert_eq!(
        report.updated,
        vec![
            (ProcessName::fixed("a"), t(1.0, 2)),
            (ProcessName::fixed("b"), t(1.0, 2))
        ]
    );
    // A ran twice in the same instant
    let a_runs = sink
        .of_kind(TraceKind::ProcessTransition)
        .filter(|r| r.payload.get("process").and_then(Value::as_str) == Some("a"))
        .count();
    assert_eq!(a_runs, 2);
    // loop postcondition: nobody is ready any more
    assert!(!c.shared().a_ready && !c.shared().b_ready);
    assert!(c.next_time().is_infinite());
}

#[test]
fn next_time_is_min_over_processes() {
    struct Two;
    impl BaseModel for Two {
        type State = ();
        fn initial_state(&self) {}
        fn processes(&self, _p: &()) -> ProcessSet {
            set(&["x", "y"])
        }
        fn spawn(&self, name: &ProcessName, _p: &()) -> Option<Spawn<()>> {
            // created at (0,0), so t_last = (0,1)
            let omega = if name.as_str() == "x" {
                t(5.0, -1)
            } else {
                t(3.0, 1)
            };
            Some(Spawn::new(Fixed(omega), ()))
        }
        fn output(&self, _p: &(), _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
            FlowValue::null()
        }
    }
    let c = BaseComponent::new(Two).unwrap();
    assert_eq!(c.process("x").unwrap().next_time(), t(5.0, 0));
    assert_eq!(c.next_time(), t(3.0, 2));

    struct Empty;
    impl BaseModel for Empty {
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
    assert!(BaseComponent::new(Empty).unwrap().next_time().is_infinite());
}

/// Passive-or-fixed-deadline process with no behavior.
struct Fixed(HyTime);

impl<S> ProcessModel<S> for Fixed {
    type State = ();
    type Index = ();
    fn index(&self, _p: &()) {}
    fn time_to_input(&self, _i: (), _p: &()) -> HyTime {
        HyTime::INFINITY
    }
    fn time_to_output(&self, _i: (), _p: &()) -> HyTime {
        self.0
    }
    fn transition(&self, _i: (), _p: &mut (), _e: HyTime, _s: &mut S) {}
    fn discrete_output(&self, _i: (), _p: &(), _s: &S) -> Value {
        Value::Unit
    }
}

#[test]
fn passive_process_gives_infinite_next_time() {
    struct One;
    impl BaseModel for One {
        type State = ();
        fn initial_state(&self) {}
        fn processes(&self, _p: &()) -> ProcessSet {
            set(&["idle"])
        }
        fn spawn(&self, _n: &ProcessName, _p: &()) -> Option<Spawn<()>> {
            Some(Spawn::new(Fixed(HyTime::INFINITY), ()))
        }
        fn output(&self, _p: &(), _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
            FlowValue::null()
        }
    }
    assert!(BaseComponent::new(One).unwrap().next_time().is_infinite());
}

#[test]
fn output_projects_first_process_and_keeps_null() {
    let mut c = BaseComponent::new(TimerBase { period: 2.0 }).unwrap();
    let mut sink = VecSink::new();
    let mut ctx = Context::new(&mut sink);
    c.output(t(1.0, 0), &mut ctx).unwrap();
    assert_eq!(c.value().unwrap(), &FlowValue::continuous(Value::Int(0)));
    assert_eq!(c.value().unwrap(), c.value().unwrap());
    c.output(t(2.0, 1), &mut ctx).unwrap();
    assert_eq!(
        c.value().unwrap(),
        &FlowValue::event(Value::Int(0), Value::Int(1))
    );
}

#[test]
fn value_before_output_is_an_error() {
    let c = BaseComponent::new(TimerBase { period: 2.0 }).unwrap();
    assert!(matches!(
        c.value(),
        Err(KernelError::ValueBeforeOutput { .. })
    ));
}

#[test]
fn guard_leaves_non_imminent_component_untouched() {
    let mut c = BaseComponent::new(TimerBase { period: 2.0 })
        .unwrap()
        .with_path("timer");
    let before = c.snapshot();
    let mut sink = VecSink::new();
    let mut ctx = Context::new(&mut sink);
    c.transition(t(0.5, 0), &FlowValue::continuous(3.0), &mut ctx)
        .unwrap();
    assert_eq!(c.snapshot(), before);
    assert!(sink.records.is_empty());
    assert!(c.last_report().is_none());
}

#[test]
fn discrete_input_forces_effective_transition() {
    let mut c = BaseComponent::new(Counter).unwrap();
    let mut sink = VecSink::new();
    let mut ctx = Context::new(&mut sink);
    c.transition(t(0.5, 0), &FlowValue::event(0.0, "hello"), &mut ctx)
        .unwrap();
    assert_eq!(c.shared(), &vec![Value::text("hello")]);
    assert!(c.last_report().unwrap().scheduled.is_empty());
}

#[test]
fn missed_deadline_is_rejected() {
    let mut c = BaseComponent::new(TimerBase { period: 2.0 }).unwrap();
    let mut sink = NullSink;
    let mut ctx = Context::new(&mut sink);
    let err = c
        .transition(t(3.0, 0), &FlowValue::event(0.0, 1i64), &mut ctx)
        .unwrap_err();
    assert!(matches!(err, KernelError::MissedTransition { .. }));
}

/// Process that is always ready, up to `limit` runs.
struct Spin {
    limit: u32,
}

impl ProcessModel<u32> for Spin {
    type State = ();
    type Index = ();
    fn index(&self, _p: &()) {}
    fn time_to_input(&self, _i: (), _p: &()) -> HyTime {
        HyTime::INFINITY
    }
    fn time_to_output(&self, _i: (), _p: &()) -> HyTime {
        HyTime::INFINITY
    }
    fn condition(&self, _i: (), _p: &(), runs: &u32) -> bool {
        *runs < self.limit
    }
    fn transition(&self, _i: (), _p: &mut (), _e: HyTime, runs: &mut u32) {
        *runs += 1;
    }
    fn discrete_output(&self, _i: (), _p: &(), _s: &u32) -> Value {
        Value::Unit
    }
}

struct SpinBase {
    limit: u32,
}

impl BaseModel for SpinBase {
    type State = u32;
    fn initial_state(&self) -> u32 {
        0
    }
    fn processes(&self, _p: &u32) -> ProcessSet {
        set(&["spin"])
    }
    fn spawn(&self, _n: &ProcessName, _p: &u32) -> Option<Spawn<u32>> {
        Some(Spawn::new(Spin { limit: self.limit }, ()))
    }
    fn output(&self, _p: &u32, _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        FlowValue::null()
    }
}

#[test]
fn livelock_bound_aborts_the_transition() {
    let limits = Limits {
        max_conditional_iterations: 10,
    };
    let mut sink = NullSink;

    let mut ok = BaseComponent::new(SpinBase { limit: 10 }).unwrap();
    let mut ctx = Context::with_limits(&mut sink, limits);
    ok.transition(t(1.0, 0), &FlowValue::event(0.0, 0i64), &mut ctx)
        .unwrap();
    assert_eq!(*ok.shared(), 10);

    let mut bad = BaseComponent::new(SpinBase { limit: u32::MAX })
        .unwrap()
        .with_path("spin");
    let err = bad
        .transition(t(1.0, 0), &FlowValue::event(0.0, 0i64), &mut ctx)
        .unwrap_err();
    assert_eq!(
        err,
        KernelError::Livelock {
            path: "spin".into(),
            t: t(1.0, 0),
            bound: 10
        }
    );
    assert!(err.is_model_defect());
}

#[test]
fn ranking_must_be_a_permutation() {
    struct Dup;
    impl BaseModel for Dup {
        type State = ();
        fn initial_state(&self) {}
        fn processes(&self, _p: &()) -> ProcessSet {
            set(&["x", "y"])
        }
        fn rank(&self, s: &ProcessSet) -> Vec<ProcessName> {
            s.iter().map(|_| ProcessName::fixed("x")).collect()
        }
        fn spawn(&self, _n: &ProcessName, _p: &()) -> Option<Spawn<()>> {
            Some(Spawn::new(Fixed(HyTime::from_real(1.0)), ()))
        }
        fn output(&self, _p: &(), _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
            FlowValue::null()
        }
    }
    let mut c = BaseComponent::new(Dup).unwrap();
    let mut sink = NullSink;
    let mut ctx = Context::new(&mut sink);
    assert!(matches!(
        c.output(t(0.5, 0), &mut ctx),
        Err(KernelError::InvalidRanking { .. })
    ));
}

#[test]
fn unknown_process_name_is_a_model_defect() {
    struct Ghost;
    impl BaseModel for Ghost {
        type State = ();
        fn initial_state(&self) {}
        fn processes(&self, _p: &()) -> ProcessSet {
            set(&["ghost"])
        }
        fn spawn(&self, _n: &ProcessName, _p: &()) -> Option<Spawn<()>> {
            None
        }
        fn output(&self, _p: &(), _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
            FlowValue::null()
        }
    }
    let err = BaseComponent::new(Ghost).err().unwrap();
    assert!(matches!(err, KernelError::UnknownProcess { ref name, .. } if name == "ghost"));
}

/// `killer` and `victim` both tick at 1.0; killer removes victim.
#[derive(Clone, Debug)]
struct Arena {
    alive: BTreeSet<&'static str>,
    spawned: u32,
}

struct Killer;

impl ProcessModel<Arena> for Killer {
    type State = ();
    type Index = ();
    fn index(&self, _p: &()) {}
    fn time_to_input(&self, _i: (), _p: &()) -> HyTime {
        HyTime::INFINITY
    }
    fn time_to_output(&self, _i: (), _p: &()) -> HyTime {
        HyTime::from_real(1.0)
    }
    fn transition(&self, _i: (), _p: &mut (), _e: HyTime, s: &mut Arena) {
        s.alive.remove("victim");
    }
    fn discrete_output(&self, _i: (), _p: &(), _s: &Arena) -> Value {
        Value::Unit
    }
}

/// Adds a fresh `child` process on every tick.
struct Spawner;

impl ProcessModel<Arena> for Spawner {
    type State = ();
    type Index = ();
    fn index(&self, _p: &()) {}
    fn time_to_input(&self, _i: (), _p: &()) -> HyTime {
        HyTime::INFINITY
    }
    fn time_to_output(&self, _i: (), _p: &()) -> HyTime {
        HyTime::from_real(1.0)
    }
    fn transition(&self, _i: (), _p: &mut (), _e: HyTime, s: &mut Arena) {
        s.alive.insert("child");
        s.spawned += 1;
    }
    fn discrete_output(&self, _i: (), _p: &(), _s: &Arena) -> Value {
        Value::Unit
    }
}

/// Runs once, as soon as it exists.
struct Eager;

impl ProcessModel<Arena> for Eager {
    type State = bool;
    type Index = ();
    fn index(&self, _p: &bool) {}
    fn time_to_input(&self, _i: (), _p: &bool) -> HyTime {
        HyTime::INFINITY
    }
    fn time_to_output(&self, _i: (), _p: &bool) -> HyTime {
        HyTime::INFINITY
    }
    fn condition(&self, _i: (), started: &bool, _s: &Arena) -> bool {
        !*started
    }
    fn transition(&self, _i: (), started: &mut bool, _e: HyTime, _s: &mut Arena) {
        *started = true;
    }
    fn discrete_output(&self, _i: (), _p: &bool, _s: &Arena) -> Value {
        Value::Unit
    }
}

struct ArenaBase(&'static [&'static str]);

impl BaseModel for ArenaBase {
    type State = Arena;
    fn initial_state(&self) -> Arena {
        Arena {
            alive: self.0.iter().copied().collect(),
            spawned: 0,
        }
    }
    fn processes(&self, p: &Arena) -> ProcessSet {
        p.alive.iter().map(|n| ProcessName::fixed(n)).collect()
    }
    fn spawn(&self, name: &ProcessName, _p: &Arena) -> Option<Spawn<Arena>> {
        match name.as_str() {
            "killer" => Some(Spawn::new(Killer, ())),
            "victim" => Some(Spawn::new(Killer, ())),
            "spawner" => Some(Spawn::new(Spawner, ())),
            "child" => Some(Spawn::new(Eager, false)),
            _ => None,
        }
    }
    fn output(&self, _p: &Arena, _o: &[(&ProcessName, &FlowValue)]) -> FlowValue {
        FlowValue::null()
    }
}

#[test]
fn process_removed_mid_instant_is_skipped() {
    let mut c = BaseComponent::new(ArenaBase(&["killer", "victim"])).unwrap();
    assert_eq!(c.next_time(), t(1.0, 1));
    let mut sink = VecSink::new();
    step(&mut c, t(1.0, 1), &mut sink);
    let report = c.last_report().unwrap();
    assert_eq!(names(&report.scheduled), ["killer", "victim"]);
    assert_eq!(names(&report.removed), ["victim"]);
    assert_eq!(
        report.updated,
        vec![(ProcessName::fixed("killer"), t(1.0, 2))]
    );
    assert_eq!(sink.of_kind(TraceKind::ProcessTransition).count(), 1);
    let live: Vec<_> = c.live_processes().map(ProcessName::as_str).collect();
    assert_eq!(live, ["killer"]);
}

#[test]
fn process_created_mid_instant_waits_for_the_next_superdense_point() {
    let mut c = BaseComponent::new(ArenaBase(&["spawner"])).unwrap();
    let mut sink = VecSink::new();
    step(&mut c, t(1.0, 1), &mut sink);
    let report = c.last_report().unwrap();
    assert_eq!(names(&report.created), ["child"]);
    assert!(report.conditional.is_empty());
    assert_eq!(c.process("child").unwrap().t_last(), t(1.0, 2));
    assert_eq!(c.process_count(), 2);

    // the next base transition is the first chance for its condition
    step(&mut c, t(2.0, 2), &mut sink);
    let report = c.last_report().unwrap();
    assert_eq!(names(&report.scheduled), ["spawner"]);
    assert_eq!(names(&report.conditional), ["child"]);
    assert_eq!(c.process("child").unwrap().t_last(), t(2.0, 3));
}

#[test]
fn untouched_processes_keep_their_t_last() {
    let mut c = BaseComponent::new(ArenaBase(&["spawner"])).unwrap();
    let mut sink = VecSink::new();
    step(&mut c, t(1.0, 1), &mut sink);
    step(&mut c, t(2.0, 2), &mut sink);
    // child is done now; the spawner's next tick does not touch it
    step(&mut c, t(3.0, 3), &mut sink);
    assert_eq!(c.process("child").unwrap().t_last(), t(2.0, 3));
    assert_eq!(c.process("spawner").unwrap().t_last(), t(3.0, 4));
}

#[test]
fn identical_components_evolve_identically() {
    let run = || {
        let mut c = BaseComponent::new(HandshakeBase).unwrap();
        let mut sink = VecSink::new();
        step(&mut c, t(1.0, 1), &mut sink);
        (c.snapshot(), sink.records)
    };
    assert_eq!(run(), run());
}

#[test]
fn input_rejection_surfaces_as_error() {
    struct Picky;
    impl BaseModel for Picky {
        type State = ();
        fn initial_state(&self) {}
        fn input(&self, _p: &mut (), x: &FlowValue) -> Result<(), InputRejected> {
            match &x.discrete {
                Some(Value::Int(_)) | None => Ok(()),
                Some(other) => Err(format!("expected an integer, got {other:?}").into()),
            }
        }
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
    let mut c = BaseComponent::new(Picky).unwrap();
    let mut sink = NullSink;
    let mut ctx = Context::new(&mut sink);
    c.transition(t(1.0, 0), &FlowValue::event(0.0, 3i64), &mut ctx)
        .unwrap();
    let err = c
        .transition(t(2.0, 0), &FlowValue::event(0.0, "x"), &mut ctx)
        .unwrap_err();
    assert!(matches!(err, KernelError::InputRejected { .. }));
}
