//! Person-approach detection on three synthetic depth streams: a walker
//! coming in, a walker leaving, and a stationary person in sensor noise.
//!
//! ```bash
//! cargo run --example approach_trigger
//! ```

use hugbot::perception::{should_initiate, ApproachWindow, DetectionSample};
use hugbot::HugConfig;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

fn run_stream(name: &str, cfg: &HugConfig, distances: &[f64]) {
    let mut window = ApproachWindow::new(cfg.approach_window_len);
    let mut trigger_at = None;
    for (k, &d) in distances.iter().enumerate() {
        let sample = DetectionSample {
            timestamp: k as f64 / cfg.camera_rate,
            distance: Some(d),
        };
        window.push_detection(&sample);
        if trigger_at.is_none() && should_initiate(&window, &sample, cfg) {
            trigger_at = Some((sample.timestamp, d));
        }
    }
    match trigger_at {
        Some((t, d)) => println!("{name:<22} -> hug triggered at t={t:.2}s, {d:.2} m"),
        None => println!("{name:<22} -> never triggered"),
    }
}

fn main() {
    let cfg = HugConfig::default();
    println!(
        "window of {} samples, margin {} m, initiate at {} m",
        cfg.approach_window_len, cfg.approach_epsilon, cfg.initiate_distance
    );
    println!();

    // Walks from 4.0 m at 1.5 m/s.
    let approach: Vec<f64> = (0..120)
        .map(|k| 4.0 - 1.5 * k as f64 / cfg.camera_rate)
        .take_while(|d| *d > 0.3)
        .collect();
    run_stream("constant approach", &cfg, &approach);

    // Walks away from 2.0 m: inside the distance threshold the whole time,
    // but the receding mean blocks the trigger.
    let leaving: Vec<f64> = (0..120)
        .map(|k| 2.0 + 1.0 * k as f64 / cfg.camera_rate)
        .collect();
    run_stream("walking away", &cfg, &leaving);

    // Stands still at 2.0 m with noisy depth readings.
    let normal = Normal::new(0.0, 0.05).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let stationary: Vec<f64> = (0..600).map(|_| 2.0 + normal.sample(&mut rng)).collect();
    run_stream("stationary in noise", &cfg, &stationary);

    println!();
    println!("losing the person clears the window:");
    let mut window = ApproachWindow::new(cfg.approach_window_len);
    for (k, d) in approach.iter().enumerate() {
        window.push_detection(&DetectionSample {
            timestamp: k as f64 / cfg.camera_rate,
            distance: Some(*d),
        });
    }
    println!("  window fill after the approach: {}", window.len());
    window.push_detection(&DetectionSample {
        timestamp: 100.0,
        distance: None,
    });
    println!("  window fill after one dropout:  {}", window.len());
}
