//! Hug lifecycle state machine.
//!
//! One hug runs Idle → Inviting → Closing → Embrace → Releasing →
//! ReturningHome → Idle; an emergency stop jumps to ReturningHome from any
//! active phase. The machine combines the approach trigger, the sizing
//! latches, and the release arbiter according to the mode flags, and emits
//! every externally visible event (speech, contact, latches, release,
//! hug end) into the trace stream.

use crate::arm::{
    fixed_hug_goal, flat_joint_id, pid_step, reference_step, release_torque_check, sizing_hug_goal,
    sizing_step, ArmCommand, ArmGeometry, ArmPose, JointId, JointState, PidGains, PidState,
    SizingLatches, JOINT_COUNT,
};
use crate::chest::ContactState;
use crate::config::{HugConfig, ModeFlags};
use crate::perception::DetectionSample;

/// What the robot says when it wants a hug.
pub const INVITE_TEXT: &str = "Can I have a hug, please?";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HugPhase {
    Idle,
    Inviting,
    Closing,
    Embrace,
    Releasing,
    ReturningHome,
}

impl HugPhase {
    pub fn name(&self) -> &'static str {
        match self {
            HugPhase::Idle => "Idle",
            HugPhase::Inviting => "Inviting",
            HugPhase::Closing => "Closing",
            HugPhase::Embrace => "Embrace",
            HugPhase::Releasing => "Releasing",
            HugPhase::ReturningHome => "ReturningHome",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Some(match text {
            "Idle" => HugPhase::Idle,
            "Inviting" => HugPhase::Inviting,
            "Closing" => HugPhase::Closing,
            "Embrace" => HugPhase::Embrace,
            "Releasing" => HugPhase::Releasing,
            "ReturningHome" => HugPhase::ReturningHome,
            _ => return None,
        })
    }

    fn is_active_hug(&self) -> bool {
        matches!(
            self,
            HugPhase::Inviting | HugPhase::Closing | HugPhase::Embrace | HugPhase::Releasing
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReleaseCause {
    Torque,
    Pressure,
    Timer,
    EStop,
}

impl ReleaseCause {
    pub fn name(&self) -> &'static str {
        match self {
            ReleaseCause::Torque => "Torque",
            ReleaseCause::Pressure => "Pressure",
            ReleaseCause::Timer => "Timer",
            ReleaseCause::EStop => "EStop",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Some(match text {
            "Torque" => ReleaseCause::Torque,
            "Pressure" => ReleaseCause::Pressure,
            "Timer" => ReleaseCause::Timer,
            "EStop" => ReleaseCause::EStop,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitiatedBy {
    Vision,
    KeyPress,
}

impl InitiatedBy {
    pub fn name(&self) -> &'static str {
        match self {
            InitiatedBy::Vision => "vision",
            InitiatedBy::KeyPress => "key",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    /// Spoken invitation; the payload is exactly the spoken text.
    InviteSpeech(String),
    HugStarted,
    /// The chamber entered contact during an active hug.
    ContactDetected,
    SizingLatched(JointId),
    ReleaseTriggered(ReleaseCause),
    HugEnded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerEvent {
    pub timestamp: f64,
    pub kind: EventKind,
}

/// Sampled-and-held sensor values and operator flags for one control tick.
#[derive(Debug, Clone)]
pub struct ControllerInputs {
    /// Latest person detection, if any has arrived yet.
    pub detection: Option<DetectionSample>,
    /// Held output of the approach trigger at the latest detection.
    pub vision_trigger: bool,
    pub contact: ContactState,
    pub joints: [JointState; JOINT_COUNT],
    pub key_press: bool,
    pub emergency_stop: bool,
    /// Controller clock (s).
    pub clock: f64,
}

/// Per-hug working state: motion references, PID states, latches, and the
/// bookkeeping bits the release arbiter needs. Reset when a hug ends.
#[derive(Debug, Clone)]
pub struct FsmAux {
    geometry: ArmGeometry,
    references: ArmPose,
    pids: [PidState; JOINT_COUNT],
    goal: Option<ArmPose>,
    latches: SizingLatches,
    closure_complete_at: Option<f64>,
    contact_established: bool,
    prev_in_contact: bool,
    release_emitted: bool,
    initiated_by: Option<InitiatedBy>,
}

impl FsmAux {
    pub fn new(geometry: ArmGeometry) -> Self {
        Self {
            references: geometry.home,
            geometry,
            pids: [PidState::new(PidGains::default()); JOINT_COUNT],
            goal: None,
            latches: SizingLatches::default(),
            closure_complete_at: None,
            contact_established: false,
            prev_in_contact: false,
            release_emitted: false,
            initiated_by: None,
        }
    }

    pub fn references(&self) -> &ArmPose {
        &self.references
    }

    pub fn latches(&self) -> &SizingLatches {
        &self.latches
    }

    pub fn closure_complete_at(&self) -> Option<f64> {
        self.closure_complete_at
    }

    pub fn initiated_by(&self) -> Option<InitiatedBy> {
        self.initiated_by
    }

    fn reset_hug(&mut self) {
        self.goal = None;
        self.latches = SizingLatches::default();
        self.closure_complete_at = None;
        self.contact_established = false;
        self.release_emitted = false;
        self.initiated_by = None;
        for pid in &mut self.pids {
            pid.reset();
        }
    }

    fn step_references_toward(&mut self, goal: &ArmPose, speed: f64, dt: f64) {
        for flat in 0..JOINT_COUNT {
            self.references.0[flat] =
                reference_step(self.references.0[flat], goal.0[flat], speed, dt);
        }
    }
}

/// Picks the release cause during an embrace.
///
/// Priority: EStop > Torque > Pressure > Timer. The torque path is live in
/// every mode; leaning out of a hug must always work. Pressure fires only
/// in haptic-release mode and only after chamber contact was established
/// during this hug, since "squeeze ended" is meaningless if no squeeze ever
/// began. The timer fires only when haptic release is off.
#[allow(clippy::too_many_arguments)]
pub fn release_arbiter(
    flags: &ModeFlags,
    emergency_stop: bool,
    joints: &[JointState; JOINT_COUNT],
    contact_established: bool,
    in_contact: bool,
    clock: f64,
    closure_complete_at: Option<f64>,
    cfg: &HugConfig,
) -> Option<ReleaseCause> {
    if emergency_stop {
        return Some(ReleaseCause::EStop);
    }
    if release_torque_check(joints, cfg) {
        return Some(ReleaseCause::Torque);
    }
    if flags.haptic_release && contact_established && !in_contact {
        return Some(ReleaseCause::Pressure);
    }
    if !flags.haptic_release {
        if let Some(done) = closure_complete_at {
            if clock >= done + cfg.timed_release_delay {
                return Some(ReleaseCause::Timer);
            }
        }
    }
    None
}

/// Advances the hug state machine by one control tick.
///
/// Returns the next phase, the drive command for every joint, and the
/// events raised this tick. `aux` carries all per-hug state between ticks.
pub fn fsm_step(
    phase: HugPhase,
    inputs: &ControllerInputs,
    aux: &mut FsmAux,
    flags: &ModeFlags,
    cfg: &HugConfig,
    dt: f64,
) -> (HugPhase, [ArmCommand; JOINT_COUNT], Vec<ControllerEvent>) {
    let now = inputs.clock;
    let mut events: Vec<ControllerEvent> = Vec::new();
    let emit = |kind: EventKind, events: &mut Vec<ControllerEvent>| {
        events.push(ControllerEvent {
            timestamp: now,
            kind,
        });
    };

    let in_contact = inputs.contact.in_contact();
    if phase.is_active_hug() {
        if in_contact && !aux.prev_in_contact {
            emit(EventKind::ContactDetected, &mut events);
        }
        if in_contact {
            aux.contact_established = true;
        }
    }
    aux.prev_in_contact = in_contact;

    let mut next = phase;
    if inputs.emergency_stop && phase.is_active_hug() {
        // A release event is emitted at most once per hug; an e-stop after
        // a normal release still goes home but stays silent.
        if !aux.release_emitted {
            emit(
                EventKind::ReleaseTriggered(ReleaseCause::EStop),
                &mut events,
            );
            aux.release_emitted = true;
        }
        next = HugPhase::ReturningHome;
    } else {
        match phase {
            HugPhase::Idle => {
                let vision_start = flags.vision && inputs.vision_trigger;
                if vision_start || inputs.key_press {
                    aux.initiated_by = Some(if vision_start {
                        InitiatedBy::Vision
                    } else {
                        InitiatedBy::KeyPress
                    });
                    aux.contact_established = in_contact;
                    emit(
                        EventKind::InviteSpeech(INVITE_TEXT.to_string()),
                        &mut events,
                    );
                    emit(EventKind::HugStarted, &mut events);
                    next = HugPhase::Inviting;
                }
            }
            HugPhase::Inviting => {
                // Speech is non-blocking: closing starts on the next tick.
                aux.goal = Some(if flags.sizing {
                    sizing_hug_goal(&aux.geometry)
                } else {
                    fixed_hug_goal(&aux.geometry, cfg)
                });
                next = HugPhase::Closing;
            }
            HugPhase::Closing => {
                let goal = aux.goal.expect("closing goal is set on entry");
                if flags.sizing {
                    for id in sizing_step(&mut aux.latches, &inputs.joints, cfg, now) {
                        let latch = *aux.latches.get(id).expect("just latched");
                        // Freeze the reference at the latched angle so the
                        // PID holds position instead of pushing on.
                        aux.references.set_angle(id, latch.angle);
                        aux.pids[id.flat()].reset();
                        emit(EventKind::SizingLatched(id), &mut events);
                    }
                }
                for flat in 0..JOINT_COUNT {
                    let id = flat_joint_id(flat);
                    if flags.sizing && aux.latches.is_latched(id) {
                        continue;
                    }
                    aux.references.0[flat] =
                        reference_step(aux.references.0[flat], goal.0[flat], cfg.joint_speed, dt);
                }
                let closed = if flags.sizing {
                    aux.latches.all_latched()
                } else {
                    aux.references == goal
                };
                if closed {
                    aux.closure_complete_at = Some(now);
                    next = HugPhase::Embrace;
                }
            }
            HugPhase::Embrace => {
                let cause = release_arbiter(
                    flags,
                    inputs.emergency_stop,
                    &inputs.joints,
                    aux.contact_established,
                    in_contact,
                    now,
                    aux.closure_complete_at,
                    cfg,
                );
                if let Some(cause) = cause {
                    emit(EventKind::ReleaseTriggered(cause), &mut events);
                    aux.release_emitted = true;
                    next = if cause == ReleaseCause::EStop {
                        HugPhase::ReturningHome
                    } else {
                        HugPhase::Releasing
                    };
                }
            }
            HugPhase::Releasing => {
                let home = aux.geometry.home;
                aux.step_references_toward(&home, cfg.joint_speed, dt);
                if aux.references == home {
                    next = HugPhase::ReturningHome;
                }
            }
            HugPhase::ReturningHome => {
                let home = aux.geometry.home;
                aux.step_references_toward(&home, cfg.joint_speed, dt);
                if aux.references == home {
                    emit(EventKind::HugEnded, &mut events);
                    aux.reset_hug();
                    next = HugPhase::Idle;
                }
            }
        }
    }

    let commands = std::array::from_fn(|flat| {
        let reference = aux.references.0[flat];
        let velocity = pid_step(
            &mut aux.pids[flat],
            reference,
            inputs.joints[flat].angle,
            dt,
        );
        ArmCommand {
            joint: flat_joint_id(flat),
            target: reference,
            velocity,
        }
    });

    (next, commands, events)
}

/// Owns the phase and per-hug state for callers that want a plain
/// step interface instead of threading state themselves.
#[derive(Debug, Clone)]
pub struct HugController {
    phase: HugPhase,
    flags: ModeFlags,
    aux: FsmAux,
}

impl HugController {
    pub fn new(geometry: ArmGeometry, flags: ModeFlags) -> Self {
        Self {
            phase: HugPhase::Idle,
            flags,
            aux: FsmAux::new(geometry),
        }
    }

    pub fn phase(&self) -> HugPhase {
        self.phase
    }

    pub fn flags(&self) -> &ModeFlags {
        &self.flags
    }

    pub fn aux(&self) -> &FsmAux {
        &self.aux
    }

    pub fn step(
        &mut self,
        inputs: &ControllerInputs,
        cfg: &HugConfig,
        dt: f64,
    ) -> ([ArmCommand; JOINT_COUNT], Vec<ControllerEvent>) {
        let (next, commands, events) =
            fsm_step(self.phase, inputs, &mut self.aux, &self.flags, cfg, dt);
        self.phase = next;
        (commands, events)
    }
}
