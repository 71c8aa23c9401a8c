//! The `sim` command line.
//!
//! ```text
//! sim list [--json]
//! sim run <model> --end <real> [--seed <u64>] [--param k=v ...]
//!         [--out <path>] [--format jsonl|csv] [--max-cond-iters <n>]
//! ```
//!
//! `run` also accepts `--<key> <value>` and `--<key>=<value>` for any model
//! parameter, as a shorthand for `--param <key>=<value>`.
//!
//! Exit codes: 0 success, 1 usage error (no trace file is created),
//! 2 model defect or kernel fault during the run.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hysim_core::{
    run_simulation, Context, HyTime, KernelError, Limits, NullSink, Summary, TraceSink,
    DEFAULT_MAX_CONDITIONAL_ITERATIONS,
};

use crate::params::split_pair;
use crate::registry::{BuildError, ModelRegistry};
use crate::trace::{ChannelSink, TraceFormat};

#[derive(Debug, Parser)]
#[command(name = "sim", version, about = "Run hybrid process-interaction models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the registered models and their parameters.
    List {
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
    },
    /// Run a model and write its trace.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub model: String,
    /// Simulation end time (real part); events at exactly this time are not run.
    #[arg(long, allow_negative_numbers = true)]
    pub end: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Model parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Trace file; without it no trace is written.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = TraceFormat::Jsonl)]
    pub format: TraceFormat,
    /// Bound on conditional re-activations within one base transition.
    #[arg(long, default_value_t = DEFAULT_MAX_CONDITIONAL_ITERATIONS)]
    pub max_cond_iters: usize,
}

const RUN_FLAGS: &[&str] = &[
    "end",
    "seed",
    "param",
    "out",
    "format",
    "max-cond-iters",
    "help",
];

/// Rewrites `--key value` / `--key=value` for unknown `run` flags into
/// `--param key=value`.
pub fn expand_shorthand(args: Vec<OsString>) -> Vec<OsString> {
    let is_run = args.get(1).is_some_and(|a| a == "run");
    if !is_run {
        return args;
    }
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(flag) = arg.to_str().and_then(|s| s.strip_prefix("--")) else {
            out.push(arg);
            continue;
        };
        if flag.is_empty() {
            out.push(arg);
            out.extend(it);
            break;
        }
        let (key, inline) = match flag.split_once('=') {
            Some((k, v)) => (k.to_string(), Some(v.to_string())),
            None => (flag.to_string(), None),
        };
        if RUN_FLAGS.contains(&key.as_str()) {
            out.push(arg);
            continue;
        }
        let value = match inline {
            Some(v) => Some(v),
            None => it.next().map(|v| v.to_string_lossy().into_owned()),
        };
        match value {
            Some(v) => {
                out.push("--param".into());
                out.push(format!("{key}={v}").into());
            }
            // let clap report the dangling flag
            None => out.push(arg),
        }
    }
    out
}

#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Io(io::Error),
    Model(KernelError),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Usage(_) | RunError::Io(_) => 1,
            RunError::Model(_) => 2,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(m) => write!(f, "usage error: {m}"),
            RunError::Io(e) => write!(f, "io error: {e}"),
            RunError::Model(e) if e.is_model_defect() => write!(f, "model defect: {e}"),
            RunError::Model(e) => write!(f, "simulation fault: {e}"),
        }
    }
}

impl From<BuildError> for RunError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Kernel(k) => RunError::Model(k),
            other => RunError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug)]
pub struct RunReport {
    pub summary: Summary,
    pub records: u64,
    pub wall: std::time::Duration,
}

pub fn list(registry: &ModelRegistry, json: bool, out: &mut dyn Write) -> io::Result<()> {
    if json {
        let models: Vec<_> = registry
            .entries()
            .iter()
            .map(|e| {
                serde_json::json!({
                    "name": e.name,
                    "summary": e.summary,
                    "params": e.params.iter().map(|p| serde_json::json!({
                        "name": p.name,
                        "default": p.default,
                        "doc": p.doc,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        writeln!(out, "{}", serde_json::Value::Array(models))
    } else {
        for e in registry.entries() {
            writeln!(out, "{}  {}", e.name, e.summary)?;
            for p in e.params {
                let default = if p.default.is_empty() {
                    "unset"
                } else {
                    p.default
                };
                writeln!(out, "    {}={}  {}", p.name, default, p.doc)?;
            }
        }
        Ok(())
    }
}

/// Validates, builds and runs. The trace file is only created once the
/// model has been built.
pub fn run(registry: &ModelRegistry, args: &RunArgs) -> Result<RunReport, RunError> {
    if !(args.end.is_finite() && args.end >= 0.0) {
        return Err(RunError::Usage(format!(
            "--end must be a finite number >= 0, got {}",
            args.end
        )));
    }
    if args.max_cond_iters == 0 {
        return Err(RunError::Usage(
            "--max-cond-iters must be at least 1".into(),
        ));
    }
    let given = args
        .params
        .iter()
        .map(|p| split_pair(p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| RunError::Usage(e.to_string()))?;
    let mut component = registry.build(&args.model, &given, args.seed)?;
    log::info!("built {} (seed {})", args.model, args.seed);

    let limits = Limits {
        max_conditional_iterations: args.max_cond_iters,
    };
    let end = HyTime::from_real(args.end);
    let started = Instant::now();
    let (summary, records) = match &args.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| RunError::Usage(format!("cannot create {}: {e}", path.display())))?;
            let mut sink = ChannelSink::spawn(file, args.format);
            let result = run_with(&mut *component, end, &mut sink, limits);
            let written = sink.finish().map_err(RunError::Io)?;
            (result?, written)
        }
        None => (run_with(&mut *component, end, &mut NullSink, limits)?, 0),
    };
    let wall = started.elapsed();
    log::info!("{} steps in {:.3} s", summary.steps, wall.as_secs_f64());
    Ok(RunReport {
        summary,
        records,
        wall,
    })
}

fn run_with(
    component: &mut dyn hysim_core::Component,
    end: HyTime,
    sink: &mut dyn TraceSink,
    limits: Limits,
) -> Result<Summary, RunError> {
    let mut ctx = Context::with_limits(sink, limits);
    run_simulation(component, end, &mut ctx).map_err(RunError::Model)
}

/// Entry point shared by the binary and the tests.
pub fn main_with(args: Vec<OsString>, registry: &ModelRegistry) -> ExitCode {
    let cli = match Cli::try_parse_from(expand_shorthand(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::List { json } => match list(registry, json, &mut out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("sim: {e}");
                ExitCode::from(1)
            }
        },
        Command::Run(args) => match run(registry, &args) {
            Ok(report) => {
                let _ = writeln!(out, "model: {}", args.model);
                let _ = writeln!(out, "steps: {}", report.summary.steps);
                let _ = writeln!(out, "final clock: {}", report.summary.final_clock);
                if let Some(path) = &args.out {
                    let _ = writeln!(
                        out,
                        "trace: {} ({} records)",
                        path.display(),
                        report.records
                    );
                }
                let _ = writeln!(out, "wall time: {:.3} s", report.wall.as_secs_f64());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("sim: {e}");
                ExitCode::from(e.exit_code())
            }
        },
    }
}
