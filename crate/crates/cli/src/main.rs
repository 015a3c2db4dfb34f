//! Command-line front end: run the built-in queries over a log, explain a
//! produced output event, or benchmark tracker overhead.
//!
//! Exit codes: 0 ok, 1 parse error, 2 unknown query, 3 position
//! unavailable.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use streamprov::bench::{run_bench, BenchReport};
use streamprov::cost;
use streamprov::export::{export_dot, export_json, render_text};
use streamprov::logio::{infer_csv_format, parse_log, LogFormat};
use streamprov::{BuiltinQuery, Event, ExplainError};

#[derive(Parser)]
#[command(name = "streamprov", version, about = "Event-stream queries with why-provenance")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TrackerFlag {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Feed a log through a query and print each output event.
    Run {
        #[arg(long)]
        query: String,
        /// Log file path, or '-' for stdin.
        #[arg(long)]
        input: String,
        /// Lineage tracking (outputs are identical either way).
        #[arg(long, value_enum, default_value = "off")]
        tracker: TrackerFlag,
        /// The first input line is a header with field names.
        #[arg(long)]
        header: bool,
        /// Print true/false instead of ⊤/⊥.
        #[arg(long)]
        ascii: bool,
    },
    /// Explain one output event of a query over a log.
    Explain {
        #[arg(long)]
        query: String,
        #[arg(long)]
        input: String,
        /// 0-based position in the output stream.
        #[arg(long)]
        position: usize,
        /// Print only the explaining source positions and values.
        #[arg(long)]
        flatten: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        header: bool,
        #[arg(long)]
        ascii: bool,
    },
    /// Measure throughput and memory growth on a synthetic log.
    Bench {
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = 10_000)]
        length: usize,
        #[arg(long, value_enum, default_value = "on")]
        tracker: TrackerFlag,
        /// Number of evenly spaced memory samples.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

const EXIT_PARSE: u8 = 1;
const EXIT_UNKNOWN_QUERY: u8 = 2;
const EXIT_POSITION: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            eprintln!("{e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    match cli.cmd {
        Cmd::Run { query, input, tracker, header, ascii } => {
            cmd_run(&query, &input, tracker == TrackerFlag::On, header, ascii)
        }
        Cmd::Explain { query, input, position, flatten, format, header, ascii } => {
            cmd_explain(&query, &input, position, flatten, format, header, ascii)
        }
        Cmd::Bench { query, length, tracker, samples, seed, format } => {
            cmd_bench(&query, length, tracker == TrackerFlag::On, samples, seed, format)
        }
    }
}

fn lookup_query(name: &str) -> Result<BuiltinQuery, ExitCode> {
    BuiltinQuery::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = BuiltinQuery::ALL.iter().map(|q| q.name()).collect();
        eprintln!("unknown query '{}'; known queries: {}", name, known.join(", "));
        ExitCode::from(EXIT_UNKNOWN_QUERY)
    })
}

fn read_input(path: &str) -> Result<String, ExitCode> {
    let result = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map(|_| buf)
    } else {
        fs::read_to_string(path)
    };
    result.map_err(|e| {
        eprintln!("cannot read {}: {}", path, e);
        ExitCode::from(EXIT_PARSE)
    })
}

/// Reads and parses the log in the query's format, honouring --header.
fn load_events(query: BuiltinQuery, path: &str, header: bool) -> Result<Vec<Event>, ExitCode> {
    let text = read_input(path)?;
    let (format, body) = if header {
        let mut lines = text.splitn(2, '\n');
        let head = lines.next().unwrap_or("");
        let body = lines.next().unwrap_or("").to_string();
        let format = match query.input_format() {
            LogFormat::CsvTuples(_) => {
                let first_data = body.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
                infer_csv_format(head, first_data).map_err(|e| {
                    eprintln!("{e}");
                    ExitCode::from(EXIT_PARSE)
                })?
            }
            other => other,
        };
        (format, body)
    } else {
        (query.input_format(), text)
    };
    parse_log(&format, &body).map_err(|e| {
        eprintln!("{e}");
        ExitCode::from(EXIT_PARSE)
    })
}

fn feed_all(
    query: BuiltinQuery,
    events: Vec<Event>,
    tracking: bool,
) -> Result<(streamprov::Pipeline, Vec<Event>), ExitCode> {
    let mut pipeline = query.build(tracking);
    match pipeline.feed(&[events]) {
        Ok(mut out) => Ok((pipeline, out.remove(0))),
        Err(e) => {
            eprintln!("{e}");
            Err(ExitCode::from(EXIT_PARSE))
        }
    }
}

fn cmd_run(query: &str, input: &str, tracker: bool, header: bool, ascii: bool) -> ExitCode {
    let query = match lookup_query(query) {
        Ok(q) => q,
        Err(c) => return c,
    };
    let events = match load_events(query, input, header) {
        Ok(e) => e,
        Err(c) => return c,
    };
    let (_, outputs) = match feed_all(query, events, tracker) {
        Ok(r) => r,
        Err(c) => return c,
    };
    for (i, e) in outputs.iter().enumerate() {
        println!("{} {}", i, e.render(ascii));
    }
    ExitCode::SUCCESS
}

fn cmd_explain(
    query: &str,
    input: &str,
    position: usize,
    flatten: bool,
    format: Format,
    header: bool,
    ascii: bool,
) -> ExitCode {
    let query = match lookup_query(query) {
        Ok(q) => q,
        Err(c) => return c,
    };
    let events = match load_events(query, input, header) {
        Ok(e) => e,
        Err(c) => return c,
    };
    let (pipeline, outputs) = match feed_all(query, events, true) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let dag = match pipeline.explain_output(0, position) {
        Ok(dag) => dag,
        Err(ExplainError::PositionNotYetProduced { .. }) => {
            eprintln!(
                "no verdict yet: the sink has produced {} event(s), position {} is unavailable",
                outputs.len(),
                position
            );
            return ExitCode::from(EXIT_POSITION);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_POSITION);
        }
    };
    if flatten {
        for leaf in dag.flatten() {
            let value = leaf.value.as_ref().map(|v| v.render(ascii)).unwrap_or_default();
            println!("{}: {}", leaf.pointer.position, value);
        }
        return ExitCode::SUCCESS;
    }
    match format {
        Format::Dot => print!("{}", export_dot(&dag, ascii)),
        Format::Json => println!("{}", export_json(&dag)),
        Format::Text => print!("{}", render_text(&dag, ascii)),
    }
    ExitCode::SUCCESS
}

fn cmd_bench(
    query: &str,
    length: usize,
    tracker: bool,
    samples: usize,
    seed: u64,
    format: Format,
) -> ExitCode {
    let query = match lookup_query(query) {
        Ok(q) => q,
        Err(c) => return c,
    };
    if length == 0 {
        eprintln!("--length must be at least 1");
        return ExitCode::from(EXIT_PARSE);
    }
    let report = match run_bench(query, length, tracker, samples, seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    match format {
        Format::Json => println!("{}", bench_json(&report)),
        _ => print_bench_table(&report),
    }
    ExitCode::SUCCESS
}

fn bench_json(r: &BenchReport) -> String {
    let samples: Vec<serde_json::Value> = r
        .samples
        .iter()
        .map(|s| {
            json!({
                "events": s.events,
                "buffer_bytes": s.buffer_bytes,
                "tracker_bytes": s.tracker_bytes,
                "total_bytes": s.total(),
            })
        })
        .collect();
    serde_json::to_string_pretty(&json!({
        "query": r.query,
        "tracker": r.tracker,
        "events": r.events,
        "outputs": r.outputs,
        "elapsed_seconds": r.elapsed.as_secs_f64(),
        "throughput_events_per_second": r.throughput(),
        "memory_model": cost::MODEL_SUMMARY,
        "samples": samples,
    }))
    .unwrap()
}

fn print_bench_table(r: &BenchReport) {
    println!("# memory model: {}", cost::MODEL_SUMMARY);
    println!(
        "query={} tracker={} events={} outputs={}",
        r.query,
        if r.tracker { "on" } else { "off" },
        r.events,
        r.outputs
    );
    println!("elapsed={:.6}s throughput={:.0} events/s", r.elapsed.as_secs_f64(), r.throughput());
    println!("{:>10} {:>14} {:>14} {:>14}", "events", "buffer_bytes", "tracker_bytes", "total");
    for s in &r.samples {
        println!(
            "{:>10} {:>14} {:>14} {:>14}",
            s.events,
            s.buffer_bytes,
            s.tracker_bytes,
            s.total()
        );
    }
}
