#![allow(dead_code)]

use hysim::trace::{TraceFormat, TraceWriter};
use hysim_core::*;

pub fn run_traced(c: &mut dyn Component, end: f64) -> (Summary, Vec<TraceRecord>) {
    let mut sink = VecSink::new();
    let summary = run_simulation(c, HyTime::from_real(end), &mut Context::new(&mut sink)).unwrap();
    (summary, sink.records)
}

pub fn run_quiet(c: &mut dyn Component, end: f64) -> Summary {
    run_simulation(c, HyTime::from_real(end), &mut Context::new(&mut NullSink)).unwrap()
}

/// The whole trace as JSON lines.
pub fn jsonl(records: &[TraceRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    let mut w = TraceWriter::new(&mut buf, TraceFormat::Jsonl);
    for r in records {
        w.write(r);
    }
    w.finish().unwrap();
    buf
}

pub fn time_of(v: &Value) -> HyTime {
    HyTime::new(
        v.get("t").and_then(Value::as_real).expect("t"),
        v.get("eps").and_then(Value::as_int).expect("eps"),
    )
}

pub fn strings(v: Option<&Value>) -> Vec<String> {
    v.and_then(Value::as_list)
        .unwrap_or(&[])
        .iter()
        .map(|x| x.as_str().expect("name").to_string())
        .collect()
}

/// `(process, t_last)` pairs of a base transition record.
pub fn updated(r: &TraceRecord) -> Vec<(String, HyTime)> {
    r.payload
        .get("updated")
        .and_then(Value::as_list)
        .unwrap_or(&[])
        .iter()
        .map(|u| {
            (
                u.get("process")
                    .and_then(Value::as_str)
                    .unwrap()
                    .to_string(),
                time_of(u.get("t_last").unwrap()),
            )
        })
        .collect()
}

/// Process-transition records as `(time, path, process, cause)`.
pub fn process_steps(records: &[TraceRecord]) -> Vec<(HyTime, String, String, String)> {
    records
        .iter()
        .filter(|r| r.kind == TraceKind::ProcessTransition)
        .map(|r| {
            (
                r.time,
                r.path.clone(),
                r.payload
                    .get("process")
                    .and_then(Value::as_str)
                    .unwrap()
                    .to_string(),
                r.payload
                    .get("cause")
                    .and_then(Value::as_str)
                    .unwrap()
                    .to_string(),
            )
        })
        .collect()
}

/// Waiting time in queue for M/M/c, from the Erlang C formula.
pub fn erlang_c_wait(lambda: f64, mu: f64, c: u32) -> f64 {
    let a = lambda / mu;
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 0..c {
        if k > 0 {
            term *= a / k as f64;
        }
        sum += term;
    }
    let top = term * a / c as f64 * (c as f64 / (c as f64 - a));
    let prob_wait = top / (sum + top);
    prob_wait / (c as f64 * mu - lambda)
}

/// Single FIFO server with constant service: returns every arrival and
/// departure as `(time, +1/-1)` in time order (departures first on ties).
pub fn fifo_events(arrivals: &[f64], service: f64) -> Vec<(f64, i64)> {
    let mut events = Vec::new();
    let mut free_at = f64::NEG_INFINITY;
    for &a in arrivals {
        let start = a.max(free_at);
        free_at = start + service;
        events.push((a, 1));
        events.push((free_at, -1));
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    events
}

/// Clients in system right after all events at or before `t`.
pub fn occupancy_at(events: &[(f64, i64)], t: f64) -> i64 {
    events
        .iter()
        .filter(|(at, _)| *at <= t)
        .map(|(_, d)| d)
        .sum()
}

/// Compares `actual` with `tests/golden/<name>`; with `HYSIM_BLESS=1` the
/// file is rewritten instead.
pub fn check_golden(name: &str, actual: &[u8]) -> Result<(), String> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("HYSIM_BLESS").is_some_and(|v| v == "1") {
        std::fs::write(&path, actual).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(());
    }
    let expected = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        return Ok(());
    }
    let exp = String::from_utf8_lossy(&expected);
    let act = String::from_utf8_lossy(actual);
    let line = exp
        .lines()
        .zip(act.lines())
        .position(|(a, b)| a != b)
        .unwrap_or_else(|| exp.lines().count().min(act.lines().count()));
    Err(format!(
        "{name} differs from golden file at line {}:\n  expected: {}\n  actual:   {}",
        line + 1,
        exp.lines().nth(line).unwrap_or("<eof>"),
        act.lines().nth(line).unwrap_or("<eof>")
    ))
}

pub const ACTIVE_CLIENT_ARRIVALS: [f64; 10] =
    [1.0, 1.5, 4.0, 4.0, 4.0, 9.5, 9.75, 12.0, 15.25, 15.5];

/// Every golden trace as `(file name, trace)`.
pub fn golden_traces() -> Vec<(&'static str, Vec<u8>)> {
    use hysim::models::{active_client, dyntopo, fixtures, mm2, sampling};
    let mut out = Vec::new();

    let mut c = fixtures::handshake(1.0).unwrap();
    out.push(("handshake.jsonl", jsonl(&run_traced(&mut c, 3.0).1)));

    let mut c = mm2::build(
        mm2::Mm2Params {
            lambda: 1.0,
            mu: 0.1,
            dist: mm2::Dist::Fixed,
            max_arrivals: None,
        },
        0,
    )
    .unwrap();
    out.push(("mm2-fixed.jsonl", jsonl(&run_traced(&mut c, 12.0).1)));

    let mut c = active_client::build(
        active_client::ActiveClientParams {
            arrivals: active_client::Arrivals::Listed(ACTIVE_CLIENT_ARRIVALS.to_vec()),
            service: 2.0,
            service_dist: mm2::Dist::Fixed,
            servers: 1,
        },
        0,
    )
    .unwrap();
    out.push(("active-client.jsonl", jsonl(&run_traced(&mut c, 30.0).1)));

    let mut c = sampling::build(sampling::SamplingParams::default()).unwrap();
    out.push(("sampling-demo.jsonl", jsonl(&run_traced(&mut c, 3.0).1)));

    let mut c = dyntopo::build(dyntopo::DyntopoParams::default()).unwrap();
    out.push(("dyntopo.jsonl", jsonl(&run_traced(&mut c, 20.0).1)));
    out
}
