//! Closed-loop scenario execution and the eight-condition batch grid.
//!
//! One run wires the controller to the simulated plant at the control rate:
//! chamber frames travel through their wire format into the contact
//! pipeline, detections feed the approach window, and both are sampled and
//! held into the controller inputs. Every tick appends one trace record;
//! the run ends at `HugEnded` or the scenario's duration limit.

use thiserror::Error;

use crate::arm::{ArmCommand, ArmGeometry, JointState, JOINT_COUNT, MONITORED_JOINTS};
use crate::chest::{parse_frame, ChestError, ChestPipeline};
use crate::config::ModeFlags;
use crate::fsm::{ControllerInputs, EventKind, HugController, HugPhase, InitiatedBy, ReleaseCause};
use crate::perception::{should_initiate, ApproachWindow, DetectionSample};
use crate::plant::Plant;
use crate::scenario::{Scenario, ScenarioError};
use crate::trace::TraceRecord;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("sensor pipeline fault: {0}")]
    Pipeline(#[from] ChestError),
}

/// Key outcomes of one run, one value per question the condition grid asks.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub scenario: String,
    pub condition: String,
    pub seed: u64,
    pub ticks: usize,
    pub initiated_by: Option<InitiatedBy>,
    pub hug_started_at: Option<f64>,
    pub embrace_at: Option<f64>,
    /// Monitored-joint closures held during the embrace, read when the
    /// release triggers (rad, `MONITORED_JOINTS` order).
    pub closure_angles: Option<[f64; 4]>,
    /// Mean of the four monitored closures (rad).
    pub closure_mean: Option<f64>,
    pub release_cause: Option<ReleaseCause>,
    pub released_at: Option<f64>,
    /// Release time minus closure-complete time (s).
    pub release_latency: Option<f64>,
    /// HugEnded minus HugStarted (s).
    pub hug_duration: Option<f64>,
    /// True when the run hit its duration limit before the hug ended.
    pub timed_out: bool,
}

impl Summary {
    pub fn to_kv_text(&self) -> String {
        fn opt_f64(value: Option<f64>) -> String {
            value.map_or("none".to_string(), |v| v.to_string())
        }
        let mut out = String::new();
        out.push_str(&format!("scenario = {}\n", self.scenario));
        out.push_str(&format!("condition = {}\n", self.condition));
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("ticks = {}\n", self.ticks));
        out.push_str(&format!(
            "initiated_by = {}\n",
            self.initiated_by.map_or("none", |i| i.name())
        ));
        out.push_str(&format!(
            "hug_started_at = {}\n",
            opt_f64(self.hug_started_at)
        ));
        out.push_str(&format!("embrace_at = {}\n", opt_f64(self.embrace_at)));
        out.push_str(&format!(
            "closure_mean_rad = {}\n",
            opt_f64(self.closure_mean)
        ));
        out.push_str(&format!(
            "closure_mean_deg = {}\n",
            opt_f64(self.closure_mean.map(f64::to_degrees))
        ));
        out.push_str(&format!(
            "release_cause = {}\n",
            self.release_cause.map_or("none", |c| c.name())
        ));
        out.push_str(&format!("released_at = {}\n", opt_f64(self.released_at)));
        out.push_str(&format!(
            "release_latency = {}\n",
            opt_f64(self.release_latency)
        ));
        out.push_str(&format!("hug_duration = {}\n", opt_f64(self.hug_duration)));
        out.push_str(&format!("timed_out = {}\n", self.timed_out));
        out
    }
}

/// Everything one scenario run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<TraceRecord>,
    pub summary: Summary,
}

/// Runs one scenario to its hug end or duration limit.
pub fn run_scenario(scenario: &Scenario) -> Result<RunOutput, RunError> {
    scenario.validate()?;
    let cfg = &scenario.config;
    let dt = cfg.dt();
    let geometry = ArmGeometry::default();

    let mut plant = Plant::new(geometry, scenario.plant.clone(), scenario.seed);
    let mut controller = HugController::new(geometry, scenario.flags);
    let mut chest = ChestPipeline::new();
    let mut window = ApproachWindow::new(cfg.approach_window_len);

    // Sampled-and-held sensor values between their native rates.
    let mut held_detection: Option<DetectionSample> = None;
    let mut held_vision_trigger = false;
    let mut held_pressure = scenario.plant.ambient_pressure;
    let mut joints: [JointState; JOINT_COUNT] = plant.joint_states(&scenario.user);

    let max_ticks = (scenario.duration * cfg.control_rate).ceil() as usize;
    let mut records: Vec<TraceRecord> = Vec::with_capacity(max_ticks.min(1 << 22));

    let mut summary = Summary {
        scenario: scenario.name.clone(),
        condition: scenario.flags.label(),
        seed: scenario.seed,
        ticks: 0,
        initiated_by: None,
        hug_started_at: None,
        embrace_at: None,
        closure_angles: None,
        closure_mean: None,
        release_cause: None,
        released_at: None,
        release_latency: None,
        hug_duration: None,
        timed_out: false,
    };

    let mut ended = false;
    for tick in 0..max_ticks {
        let now = tick as f64 / cfg.control_rate;
        let phase_before = controller.phase();

        let key_fallback = scenario
            .key_press_at
            .is_some_and(|at| now >= at && summary.hug_started_at.is_none());
        let inputs = ControllerInputs {
            detection: held_detection,
            vision_trigger: held_vision_trigger,
            contact: chest.contact(),
            joints,
            key_press: key_fallback,
            emergency_stop: scenario.estop_at.is_some_and(|at| now >= at),
            clock: now,
        };

        let (commands, events) = controller.step(&inputs, cfg, dt);

        for event in &events {
            match &event.kind {
                EventKind::HugStarted => {
                    summary.hug_started_at = Some(event.timestamp);
                    summary.initiated_by = controller.aux().initiated_by();
                }
                EventKind::ReleaseTriggered(cause) => {
                    summary.release_cause = Some(*cause);
                    summary.released_at = Some(event.timestamp);
                    summary.release_latency = controller
                        .aux()
                        .closure_complete_at()
                        .map(|done| event.timestamp - done);
                    let closures: [f64; 4] =
                        MONITORED_JOINTS.map(|id| geometry.closure(id, joints[id.flat()].angle));
                    summary.closure_mean =
                        Some(closures.iter().sum::<f64>() / closures.len() as f64);
                    summary.closure_angles = Some(closures);
                }
                EventKind::HugEnded => {
                    summary.hug_duration = summary
                        .hug_started_at
                        .map(|started| event.timestamp - started);
                    ended = true;
                }
                _ => {}
            }
        }

        if phase_before != HugPhase::Embrace && controller.phase() == HugPhase::Embrace {
            summary.embrace_at = Some(now);
            plant.mark_embrace(now);
        }

        records.push(TraceRecord::from_tick(
            now,
            controller.phase(),
            joints.map(|j| j.angle),
            MONITORED_JOINTS.map(|id| joints[id.flat()].torque),
            held_pressure,
            held_detection.and_then(|d| d.distance),
            &events,
        ));
        summary.ticks = tick + 1;

        if ended {
            plant.clear_embrace();
            break;
        }

        let output = advance_plant(&mut plant, &commands, scenario, cfg, dt)?;
        joints = output.joints;
        for frame in &output.frames {
            let sample = parse_frame(frame, cfg.haptic_rate)?;
            held_pressure = sample.pressure;
            chest.feed(sample, cfg)?;
        }
        for detection in &output.detections {
            window.push_detection(detection);
            held_vision_trigger = should_initiate(&window, detection, cfg);
            held_detection = Some(*detection);
        }
    }

    summary.timed_out = !ended;
    Ok(RunOutput { records, summary })
}

struct PlantTick {
    joints: [JointState; JOINT_COUNT],
    frames: Vec<String>,
    detections: Vec<DetectionSample>,
}

fn advance_plant(
    plant: &mut Plant,
    commands: &[ArmCommand; JOINT_COUNT],
    scenario: &Scenario,
    cfg: &crate::config::HugConfig,
    dt: f64,
) -> Result<PlantTick, RunError> {
    let output = plant.step(commands, &scenario.user, cfg, dt);
    Ok(PlantTick {
        joints: output.joints,
        frames: output.chamber_frames,
        detections: output.detections,
    })
}

/// One grid cell: the condition plus its run.
#[derive(Debug, Clone)]
pub struct ConditionRun {
    pub flags: ModeFlags,
    pub summary: Summary,
    pub records: Vec<TraceRecord>,
}

fn grid_scenarios(base: &Scenario) -> Vec<Scenario> {
    ModeFlags::all()
        .iter()
        .map(|flags| base.condition_variant(*flags, base.seed + flags.index() as u64))
        .collect()
}

/// Runs all eight flag combinations serially, seeds derived as
/// `base seed + condition index`.
pub fn run_condition_grid(base: &Scenario) -> Result<Vec<ConditionRun>, RunError> {
    grid_scenarios(base)
        .iter()
        .map(|scenario| {
            run_scenario(scenario).map(|out| ConditionRun {
                flags: scenario.flags,
                summary: out.summary,
                records: out.records,
            })
        })
        .collect()
}

/// Same grid, one thread per condition. Runs share nothing, so the traces
/// are byte-identical to the serial ones.
pub fn run_condition_grid_parallel(base: &Scenario) -> Result<Vec<ConditionRun>, RunError> {
    let scenarios = grid_scenarios(base);
    let mut results: Vec<Option<Result<ConditionRun, RunError>>> =
        (0..scenarios.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (slot, scenario) in results.iter_mut().zip(scenarios.iter()) {
            scope.spawn(move || {
                *slot = Some(run_scenario(scenario).map(|out| ConditionRun {
                    flags: scenario.flags,
                    summary: out.summary,
                    records: out.records,
                }));
            });
        }
    });
    results
        .into_iter()
        .map(|slot| slot.expect("every grid thread reports"))
        .collect()
}

/// Fixed-width comparison table over the eight conditions.
pub fn grid_table(runs: &[ConditionRun]) -> String {
    let mut out = String::new();
    out.push_str("condition  initiated  release   latency_s  closure_deg  duration_s\n");
    for run in runs {
        let s = &run.summary;
        let fmt_opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3}"));
        out.push_str(&format!(
            "{:<9}  {:<9}  {:<8}  {:<9}  {:<11}  {}\n",
            s.condition,
            s.initiated_by.map_or("-", |i| i.name()),
            s.release_cause.map_or("-", |c| c.name()),
            fmt_opt(s.release_latency),
            fmt_opt(s.closure_mean.map(f64::to_degrees)),
            fmt_opt(s.hug_duration),
        ));
    }
    out
}
