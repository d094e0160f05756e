//! Chamber pipeline walk-through: wire frames, baseline calibration, and
//! hysteresis contact detection.
//!
//! ```bash
//! cargo run --example contact_hysteresis
//! ```

use hugbot::chest::{format_frame, parse_frame, ChestPipeline};
use hugbot::HugConfig;

fn main() {
    let cfg = HugConfig::default();
    let mut pipeline = ChestPipeline::new();

    // A squeeze-and-release pressure story, as deltas above ambient.
    let ambient = 101_325.0;
    let mut deltas = vec![0.0; cfg.baseline_sample_count];
    deltas.extend([
        10_000.0, 30_000.0, 49_000.0, // approach the start threshold
        52_000.0, 60_000.0, 58_000.0, // squeeze: contact begins
        30_000.0, 15_000.0, 11_000.0, // easing off, still inside the band
        9_000.0, 2_000.0, 0.0, // let go: contact ends
    ]);

    println!("start threshold: baseline + {} Pa", cfg.contact_start_delta);
    println!("end threshold:   baseline + {} Pa", cfg.contact_end_delta);
    println!();

    let mut was_in_contact = false;
    for (seq, delta) in deltas.iter().enumerate() {
        let line = format_frame(seq as u64, ambient + delta, 512);
        let sample = parse_frame(&line, cfg.haptic_rate).expect("well-formed frame");
        let state = pipeline.feed(sample, &cfg).expect("in-order stream");

        if let Some(baseline) = pipeline.baseline() {
            if seq + 1 == cfg.baseline_sample_count {
                println!(
                    "baseline calibrated from the first {} samples: {:.1} Pa",
                    baseline.sample_count, baseline.pressure_mean
                );
                println!();
            }
        }
        if state.in_contact() != was_in_contact {
            let verdict = if state.in_contact() {
                "CONTACT"
            } else {
                "no contact"
            };
            println!(
                "t={:.3}s  delta={:+9.0} Pa  -> {verdict}",
                sample.timestamp, delta
            );
            was_in_contact = state.in_contact();
        }
    }

    println!();
    println!("note the band between the two thresholds: dropping from 60 kPa");
    println!("to 11 kPa keeps contact; only falling to 10 kPa ends it.");
}
