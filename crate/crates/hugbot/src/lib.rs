//! Closed-loop hugging robot controller with a deterministic simulation
//! harness.
//!
//! The controller side mirrors a physical hugging robot: a person-approach
//! trigger over a noisy depth stream, grasp-style hug sizing that stops each
//! arm joint on its own torque threshold, and haptic release driven by a
//! pressure-sensing torso chamber and joint torques. The simulation side
//! closes the loop with a seeded discrete-time plant (joints, chamber,
//! camera, virtual user) so whole hug conditions run as deterministic,
//! replayable scenarios.
//!
//! Modules:
//!
//! - [`config`]: thresholds, rates, and the three capability flags
//! - [`chest`]: chamber wire frames, baseline calibration, contact hysteresis
//! - [`perception`]: sliding-window approach detection and the hug trigger
//! - [`arm`]: motion references, PID, sizing latches, release torque check
//! - [`fsm`]: the hug lifecycle state machine and its events
//! - [`plant`]: simulated joints, chamber, camera, and user models
//! - [`scenario`]: scenario files: flags, config overrides, user, seed
//! - [`trace`]: per-tick trace records, replay, diff, and validation
//! - [`harness`]: closed-loop scenario runs and the 8-condition grid
//!
//! Each major capability has a runnable demo under `examples/`; the `hugbot`
//! binary wraps scenario runs, grids, replay, diff, and config validation
//! for the command line.

pub mod arm;
pub mod chest;
pub mod config;
pub mod fsm;
pub mod harness;
pub mod kv;
pub mod perception;
pub mod plant;
pub mod scenario;
pub mod trace;

pub use arm::{ArmCommand, ArmGeometry, ArmPose, JointId, JointState, SizingLatches};
pub use chest::{Baseline, ChamberSample, ChestPipeline, ContactState};
pub use config::{HugConfig, ModeFlags};
pub use fsm::{
    ControllerEvent, ControllerInputs, EventKind, HugController, HugPhase, InitiatedBy,
    ReleaseCause,
};
pub use harness::{
    run_condition_grid, run_condition_grid_parallel, run_scenario, RunOutput, Summary,
};
pub use perception::{ApproachWindow, DetectionSample};
pub use plant::{Plant, PlantParams, ReleaseGesture, UserModel};
pub use scenario::Scenario;
pub use trace::{diff_traces, replay_trace, validate_trace, TraceDiff, TraceRecord};
