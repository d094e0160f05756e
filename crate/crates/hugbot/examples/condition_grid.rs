//! The 2x2x2 condition grid: vision x sizing x haptic-release, one run per
//! combination of the three capability flags, all from one base scenario.
//!
//! ```bash
//! cargo run --example condition_grid
//! ```

use hugbot::harness::{grid_table, run_condition_grid, run_condition_grid_parallel};
use hugbot::scenario::Scenario;
use hugbot::trace::{diff_traces, TraceDiff};

fn main() {
    let base = Scenario {
        name: "grid".to_string(),
        seed: 17,
        key_press_at: Some(3.0), // used by the four no-vision conditions
        ..Scenario::default()
    };

    let runs = run_condition_grid(&base).expect("valid base scenario");
    println!("{}", grid_table(&runs));

    println!("lowercase letters mean the capability is off; seeds are");
    println!("base + condition index, so the grid is fully reproducible.");
    println!();

    // The eight runs share nothing, so running them on eight threads
    // produces byte-identical traces.
    let parallel = run_condition_grid_parallel(&base).expect("valid base scenario");
    let identical = runs
        .iter()
        .zip(parallel.iter())
        .all(|(a, b)| diff_traces(&a.records, &b.records) == TraceDiff::Identical);
    println!("parallel grid identical to serial: {identical}");
}
