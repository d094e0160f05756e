//! Trace round trip: run a scenario, write its trace, replay the file, and
//! diff runs against each other.
//!
//! ```bash
//! cargo run --example trace_replay
//! ```

use hugbot::harness::run_scenario;
use hugbot::scenario::Scenario;
use hugbot::trace::{diff_traces, parse_trace, trace_to_string, validate_trace, TraceDiff};

fn main() {
    let mut scenario = Scenario {
        name: "replay-demo".to_string(),
        key_press_at: Some(1.0),
        ..Scenario::default()
    };

    let first = run_scenario(&scenario).expect("valid scenario");
    println!(
        "ran `{}`: {} ticks, {} trace lines",
        scenario.name,
        first.summary.ticks,
        first.records.len()
    );

    // Identical (scenario, seed) pairs give byte-identical traces.
    let second = run_scenario(&scenario).expect("valid scenario");
    println!(
        "same seed rerun:     {}",
        diff_traces(&first.records, &second.records)
    );

    // A different seed diverges at the first noisy sensor field.
    scenario.seed += 1;
    let reseeded = run_scenario(&scenario).expect("valid scenario");
    println!(
        "seed+1 rerun:        {}",
        diff_traces(&first.records, &reseeded.records)
    );

    // The file round trip is lossless: parse(emit(trace)) re-emits the
    // same bytes, and the replayed records validate like the originals.
    let text = trace_to_string(&first.records);
    let replayed = parse_trace(&text).expect("well-formed trace");
    assert_eq!(trace_to_string(&replayed), text);
    validate_trace(&replayed).expect("structurally sound trace");
    println!(
        "file round trip:     {}",
        diff_traces(&first.records, &replayed)
    );
    assert_eq!(diff_traces(&first.records, &replayed), TraceDiff::Identical);

    println!();
    let record = &replayed[first.records.len() / 2];
    println!("a record from mid-run:");
    println!("{}", record.to_line());
}
