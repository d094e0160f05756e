//! The three ways a hug ends: the user lets go (pressure), the user leans
//! back (torque), or the robot's timer runs out.
//!
//! ```bash
//! cargo run --example release_modes
//! ```

use hugbot::harness::run_scenario;
use hugbot::plant::PiecewiseLinear;
use hugbot::scenario::Scenario;
use hugbot::{ModeFlags, ReleaseGesture, UserModel};

fn base(haptic_release: bool) -> Scenario {
    Scenario {
        flags: ModeFlags {
            vision: true,
            sizing: true,
            haptic_release,
        },
        key_press_at: Some(5.0),
        ..Scenario::default()
    }
}

fn report(name: &str, scenario: &Scenario) {
    let summary = run_scenario(scenario).expect("valid scenario").summary;
    println!(
        "{name:<12} cause={:<8} released at t={:.2}s, {:.2}s after closure",
        summary.release_cause.map_or("-", |c| c.name()),
        summary.released_at.unwrap_or(f64::NAN),
        summary.release_latency.unwrap_or(f64::NAN),
    );
}

fn main() {
    // Lets go 1.2 s into the embrace: the chamber delta decays back toward
    // baseline and the contact automaton reports the squeeze over.
    let mut hands_off = base(true);
    hands_off.name = "hands-off".to_string();
    report("hands-off", &hands_off);

    // Keeps squeezing but leans back at 40 Nm/s: a monitored joint passes
    // 20 Nm and the torque path releases.
    let mut lean = base(true);
    lean.name = "lean-back".to_string();
    lean.user.release_gesture = ReleaseGesture::LeanBack {
        at: 0.5,
        ramp: 40.0,
    };
    report("lean-back", &lean);

    // Haptic release off: the robot opens a fixed delay after full closure
    // no matter what the user does.
    let mut timed = base(false);
    timed.name = "timed".to_string();
    timed.user = UserModel {
        squeeze: PiecewiseLinear::constant(0.0),
        release_gesture: ReleaseGesture::Passive,
        ..timed.user
    };
    report("timed", &timed);

    println!();
    println!("the lean-back escape works in timed mode too; it is a safety");
    println!("path, not an experimental condition:");
    let mut lean_timed = base(false);
    lean_timed.name = "lean-timed".to_string();
    lean_timed.config.timed_release_delay = 30.0; // timer far in the future
    lean_timed.user.release_gesture = ReleaseGesture::LeanBack {
        at: 0.5,
        ramp: 40.0,
    };
    report("lean-timed", &lean_timed);
}
