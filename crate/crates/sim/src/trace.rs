//! Trace file formats and sinks.
//!
//! JSON lines: one object per record with fields `t`, `eps`, `path`,
//! `kind`, `payload`, in that order. `t` is a number, or the string `"inf"`
//! for `+∞` (then `eps` is 0). Reals are written in shortest round-trip
//! form; non-finite reals inside payloads become the strings `"inf"`,
//! `"-inf"` and `"nan"`.
//!
//! CSV: header `t,eps,path,kind,payload`, payload as JSON text.

use std::fmt;
use std::io::{self, BufWriter, Write};
use std::str::FromStr;
use std::sync::mpsc::{sync_channel, SyncSender};
use std::thread::JoinHandle;

use hysim_core::{HyTime, TraceRecord, TraceSink, Value};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceFormat {
    Jsonl,
    Csv,
}

impl FromStr for TraceFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "jsonl" => Ok(TraceFormat::Jsonl),
            "csv" => Ok(TraceFormat::Csv),
            other => Err(format!(
                "unknown trace format `{other}` (expected jsonl or csv)"
            )),
        }
    }
}

impl fmt::Display for TraceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceFormat::Jsonl => "jsonl",
            TraceFormat::Csv => "csv",
        })
    }
}

/// Serializes a [`Value`] as JSON: records become objects with their field
/// order kept, unit becomes `null`.
pub struct Json<'a>(pub &'a Value);

impl Serialize for Json<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Value::Unit => s.serialize_unit(),
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Int(i) => s.serialize_i64(*i),
            Value::Real(r) => serialize_real(*r, s),
            Value::Text(t) => s.serialize_str(t),
            Value::List(items) => {
                let mut seq = s.serialize_seq(Some(items.len()))?;
                for v in items {
                    seq.serialize_element(&Json(v))?;
                }
                seq.end()
            }
            Value::Record(fields) => {
                let mut map = s.serialize_map(Some(fields.len()))?;
                for (k, v) in fields {
                    map.serialize_entry(k, &Json(v))?;
                }
                map.end()
            }
        }
    }
}

fn serialize_real<S: Serializer>(r: f64, s: S) -> Result<S::Ok, S::Error> {
    if r.is_finite() {
        s.serialize_f64(r)
    } else if r.is_nan() {
        s.serialize_str("nan")
    } else if r > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

struct Time(HyTime);

impl Serialize for Time {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0.real())
        }
    }
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    t: Time,
    eps: i64,
    path: &'a str,
    kind: &'static str,
    payload: Json<'a>,
}

/// One record as a JSON line, without the trailing newline.
pub fn to_json_line(r: &TraceRecord) -> String {
    serde_json::to_string(&JsonRecord {
        t: Time(r.time),
        eps: r.time.eps(),
        path: &r.path,
        kind: r.kind.as_str(),
        payload: Json(&r.payload),
    })
    .expect("trace records always serialize")
}

fn time_text(t: HyTime) -> String {
    if t.is_infinite() {
        "inf".into()
    } else {
        // `Display` for f64 is shortest round-trip
        format!("{}", t.real())
    }
}

enum Encoder<W: Write> {
    Jsonl(BufWriter<W>),
    Csv(Box<csv::Writer<W>>),
}

/// Writes records in one format; remembers the first IO error, which
/// [`TraceWriter::finish`] reports.
pub struct TraceWriter<W: Write> {
    encoder: Encoder<W>,
    error: Option<io::Error>,
    written: u64,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W, format: TraceFormat) -> Self {
        let mut w = TraceWriter {
            encoder: match format {
                TraceFormat::Jsonl => Encoder::Jsonl(BufWriter::new(out)),
                TraceFormat::Csv => Encoder::Csv(Box::new(csv::Writer::from_writer(out))),
            },
            error: None,
            written: 0,
        };
        if let Encoder::Csv(c) = &mut w.encoder {
            let header = c.write_record(["t", "eps", "path", "kind", "payload"]);
            w.keep(header.map_err(io::Error::from));
        }
        w
    }

    fn keep(&mut self, r: io::Result<()>) {
        if let (Err(e), None) = (r, &self.error) {
            self.error = Some(e);
        }
    }

    pub fn write(&mut self, r: &TraceRecord) {
        if self.error.is_some() {
            return;
        }
        let result = match &mut self.encoder {
            Encoder::Jsonl(w) => {
                let line = to_json_line(r);
                w.write_all(line.as_bytes())
                    .and_then(|_| w.write_all(b"\n"))
            }
            Encoder::Csv(c) => {
                let payload = serde_json::to_string(&Json(&r.payload)).expect("values serialize");
                c.write_record([
                    time_text(r.time).as_str(),
                    &r.time.eps().to_string(),
                    &r.path,
                    r.kind.as_str(),
                    &payload,
                ])
                .map_err(io::Error::from)
            }
        };
        self.written += 1;
        self.keep(result);
    }

    /// Flushes and returns the number of records written.
    pub fn finish(mut self) -> io::Result<u64> {
        let flushed = match &mut self.encoder {
            Encoder::Jsonl(w) => w.flush(),
            Encoder::Csv(c) => c.flush(),
        };
        self.keep(flushed);
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.written),
        }
    }
}

impl<W: Write> TraceSink for TraceWriter<W> {
    fn record(&mut self, record: TraceRecord) {
        self.write(&record);
    }
}

/// Hands records to a writer thread through a bounded FIFO channel.
pub struct ChannelSink {
    tx: Option<SyncSender<TraceRecord>>,
    worker: Option<JoinHandle<io::Result<u64>>>,
}

impl ChannelSink {
    pub fn spawn<W: Write + Send + 'static>(out: W, format: TraceFormat) -> Self {
        let (tx, rx) = sync_channel::<TraceRecord>(4096);
        let worker = std::thread::Builder::new()
            .name("trace-writer".into())
            .spawn(move || {
                let mut writer = TraceWriter::new(out, format);
                for record in rx {
                    writer.write(&record);
                }
                writer.finish()
            })
            .expect("spawn trace writer thread");
        ChannelSink {
            tx: Some(tx),
            worker: Some(worker),
        }
    }

    /// Closes the channel, waits for the writer and returns its result.
    pub fn finish(mut self) -> io::Result<u64> {
        self.close()
    }

    fn close(&mut self) -> io::Result<u64> {
        drop(self.tx.take());
        match self.worker.take() {
            Some(w) => w
                .join()
                .unwrap_or_else(|_| Err(io::Error::other("trace writer panicked"))),
            None => Ok(0),
        }
    }
}

impl TraceSink for ChannelSink {
    fn record(&mut self, record: TraceRecord) {
        if let Some(tx) = &self.tx {
            // a send error means the writer stopped; finish() reports why
            let _ = tx.send(record);
        }
    }
}

impl Drop for ChannelSink {
    fn drop(&mut self) {
        let _ = self.close();
    }
}
