//! Thin command-line front end over the scenario harness.
//!
//! Exit codes: 0 on success, 1 on scenario/input errors (including a
//! reported trace difference), 2 when a trace breaks a structural
//! invariant.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hugbot::harness::{grid_table, run_condition_grid_parallel, run_scenario};
use hugbot::scenario::Scenario;
use hugbot::trace::{
    diff_traces, replay_trace, trace_to_string, validate_trace, write_trace, TraceDiff,
};
use hugbot::HugConfig;

#[derive(Parser)]
#[command(
    name = "hugbot",
    about = "Closed-loop hugging controller simulation harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and print its summary.
    Run {
        scenario: PathBuf,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the summary here instead of stdout.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Run all eight flag conditions of a scenario and print the table.
    Grid {
        scenario: PathBuf,
        /// Directory for per-condition traces and summaries.
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a trace file and print it back in canonical form.
    Replay { trace: PathBuf },
    /// Compare two trace files and report the first divergence.
    Diff { left: PathBuf, right: PathBuf },
    /// Check a config file against every invariant.
    Validate { config: PathBuf },
}

const EXIT_SCENARIO_ERROR: u8 = 1;
const EXIT_INVARIANT_VIOLATION: u8 = 2;

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            scenario,
            seed,
            trace,
            summary,
        } => cmd_run(scenario, seed, trace, summary),
        Command::Grid { scenario, out } => cmd_grid(scenario, out),
        Command::Replay { trace } => cmd_replay(trace),
        Command::Diff { left, right } => cmd_diff(left, right),
        Command::Validate { config } => cmd_validate(config),
    }
}

fn cmd_run(
    path: PathBuf,
    seed: Option<u64>,
    trace_path: Option<PathBuf>,
    summary_path: Option<PathBuf>,
) -> ExitCode {
    let mut scenario = match Scenario::load(&path) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_SCENARIO_ERROR, e),
    };
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    let output = match run_scenario(&scenario) {
        Ok(o) => o,
        Err(e) => return fail(EXIT_SCENARIO_ERROR, e),
    };
    if let Err(violation) = validate_trace(&output.records) {
        return fail(EXIT_INVARIANT_VIOLATION, violation);
    }
    if let Some(path) = trace_path {
        if let Err(e) = write_trace(&path, &output.records) {
            return fail(EXIT_SCENARIO_ERROR, e);
        }
    }
    let summary_text = output.summary.to_kv_text();
    match summary_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, summary_text) {
                return fail(EXIT_SCENARIO_ERROR, e);
            }
        }
        None => print!("{summary_text}"),
    }
    ExitCode::SUCCESS
}

fn cmd_grid(path: PathBuf, out_dir: PathBuf) -> ExitCode {
    let base = match Scenario::load(&path) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_SCENARIO_ERROR, e),
    };
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        return fail(EXIT_SCENARIO_ERROR, e);
    }
    let runs = match run_condition_grid_parallel(&base) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_SCENARIO_ERROR, e),
    };
    for run in &runs {
        if let Err(violation) = validate_trace(&run.records) {
            return fail(EXIT_INVARIANT_VIOLATION, violation);
        }
        let label = run.flags.label();
        if let Err(e) = write_trace(&out_dir.join(format!("{label}.trace")), &run.records) {
            return fail(EXIT_SCENARIO_ERROR, e);
        }
        let summary_file = out_dir.join(format!("{label}.summary"));
        if let Err(e) = std::fs::write(summary_file, run.summary.to_kv_text()) {
            return fail(EXIT_SCENARIO_ERROR, e);
        }
    }
    print!("{}", grid_table(&runs));
    ExitCode::SUCCESS
}

fn cmd_replay(path: PathBuf) -> ExitCode {
    let records = match replay_trace(&path) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_SCENARIO_ERROR, e),
    };
    if let Err(violation) = validate_trace(&records) {
        return fail(EXIT_INVARIANT_VIOLATION, violation);
    }
    print!("{}", trace_to_string(&records));
    ExitCode::SUCCESS
}

fn cmd_diff(left: PathBuf, right: PathBuf) -> ExitCode {
    let a = match replay_trace(&left) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_SCENARIO_ERROR, e),
    };
    let b = match replay_trace(&right) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_SCENARIO_ERROR, e),
    };
    let diff = diff_traces(&a, &b);
    println!("{diff}");
    match diff {
        TraceDiff::Identical => ExitCode::SUCCESS,
        _ => ExitCode::from(EXIT_SCENARIO_ERROR),
    }
}

fn cmd_validate(path: PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_SCENARIO_ERROR, e),
    };
    match HugConfig::from_kv_text(&text) {
        Ok(_) => {
            println!("config ok");
            ExitCode::SUCCESS
        }
        Err(e) => fail(EXIT_SCENARIO_ERROR, e),
    }
}
