//! Joint-level arm control: fixed-velocity motion references, per-joint PID,
//! grasp-style sizing latches, and the push-back release check.
//!
//! Each arm has six joints; the shoulder pan (joint 2) and elbow flex
//! (joint 3) carry torque sensing and are the only joints the sizing and
//! release logic watches. Torque comparisons use magnitudes throughout
//! because the mirrored arm mountings flip sign conventions.

use crate::config::HugConfig;

pub const JOINTS_PER_ARM: usize = 6;
pub const JOINT_COUNT: usize = 2 * JOINTS_PER_ARM;
pub const MONITORED_COUNT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    Left,
    Right,
}

impl Arm {
    pub fn letter(&self) -> char {
        match self {
            Arm::Left => 'L',
            Arm::Right => 'R',
        }
    }
}

/// Identifies one joint: arm side plus 1-based joint index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JointId {
    pub arm: Arm,
    /// Joint number along the arm, 1..=6.
    pub index: u8,
}

impl JointId {
    pub const fn new(arm: Arm, index: u8) -> Self {
        Self { arm, index }
    }

    /// Position in flat 12-element joint arrays: left 1..6 then right 1..6.
    pub fn flat(&self) -> usize {
        let base = match self.arm {
            Arm::Left => 0,
            Arm::Right => JOINTS_PER_ARM,
        };
        base + (self.index as usize - 1)
    }

    pub fn is_shoulder_pan(&self) -> bool {
        self.index == 2
    }

    pub fn is_elbow_flex(&self) -> bool {
        self.index == 3
    }

    pub fn is_monitored(&self) -> bool {
        self.is_shoulder_pan() || self.is_elbow_flex()
    }

    /// Label used in traces, e.g. `L2` for the left shoulder pan.
    pub fn label(&self) -> String {
        format!("{}{}", self.arm.letter(), self.index)
    }

    pub fn parse_label(text: &str) -> Option<Self> {
        let mut chars = text.chars();
        let arm = match chars.next()? {
            'L' => Arm::Left,
            'R' => Arm::Right,
            _ => return None,
        };
        let index: u8 = chars.as_str().parse().ok()?;
        if !(1..=JOINTS_PER_ARM as u8).contains(&index) {
            return None;
        }
        Some(Self { arm, index })
    }
}

/// Inverse of [`JointId::flat`].
pub fn flat_joint_id(flat: usize) -> JointId {
    debug_assert!(flat < JOINT_COUNT);
    let (arm, offset) = if flat < JOINTS_PER_ARM {
        (Arm::Left, flat)
    } else {
        (Arm::Right, flat - JOINTS_PER_ARM)
    };
    JointId::new(arm, offset as u8 + 1)
}

/// The torque-monitored joints, in trace order.
pub const MONITORED_JOINTS: [JointId; MONITORED_COUNT] = [
    JointId::new(Arm::Left, 2),
    JointId::new(Arm::Left, 3),
    JointId::new(Arm::Right, 2),
    JointId::new(Arm::Right, 3),
];

/// Angle and measured torque of one joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    pub id: JointId,
    /// Joint angle (rad).
    pub angle: f64,
    /// Measured joint torque (Nm), sign per the arm's mounting.
    pub torque: f64,
}

/// Target angles for all twelve joints (rad), flat-indexed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmPose(pub [f64; JOINT_COUNT]);

impl ArmPose {
    pub fn angle(&self, id: JointId) -> f64 {
        self.0[id.flat()]
    }

    pub fn set_angle(&mut self, id: JointId, angle: f64) {
        self.0[id.flat()] = angle;
    }
}

/// Home pose and per-joint closing directions, declared by whichever plant
/// or robot the controller drives. Closure is measured as signed progress
/// from home along the closing direction, so the control logic never needs
/// to know which way a joint folds.
#[derive(Debug, Clone, Copy)]
pub struct ArmGeometry {
    pub home: ArmPose,
    /// +1 or -1 for the monitored joints, 0 for joints that hold home.
    pub closing_sign: [f64; JOINT_COUNT],
}

impl Default for ArmGeometry {
    fn default() -> Self {
        let mut closing_sign = [0.0; JOINT_COUNT];
        // Mirrored mounting: the right arm closes by decreasing angles.
        closing_sign[JointId::new(Arm::Left, 2).flat()] = 1.0;
        closing_sign[JointId::new(Arm::Left, 3).flat()] = 1.0;
        closing_sign[JointId::new(Arm::Right, 2).flat()] = -1.0;
        closing_sign[JointId::new(Arm::Right, 3).flat()] = -1.0;
        Self {
            home: ArmPose([0.0; JOINT_COUNT]),
            closing_sign,
        }
    }
}

impl ArmGeometry {
    /// Signed closure of a joint: how far past home it has folded inward.
    pub fn closure(&self, id: JointId, angle: f64) -> f64 {
        (angle - self.home.angle(id)) * self.closing_sign[id.flat()]
    }

    /// Pose with the given closure (rad) applied to every monitored joint.
    pub fn closed_pose(&self, closure: f64) -> ArmPose {
        let mut pose = self.home;
        for id in MONITORED_JOINTS {
            pose.set_angle(
                id,
                self.home.angle(id) + self.closing_sign[id.flat()] * closure,
            );
        }
        pose
    }
}

/// Moves a motion reference toward its goal at fixed speed, arriving
/// exactly with no overshoot.
pub fn reference_step(current_ref: f64, goal: f64, speed: f64, dt: f64) -> f64 {
    let max_step = speed * dt;
    let remaining = goal - current_ref;
    if remaining.abs() <= max_step {
        goal
    } else {
        current_ref + max_step.copysign(remaining)
    }
}

/// One-size-fits-most goal: home with joints 2 and 3 of both arms closed
/// by `fixed_close_angle`. Offsets compound if applied repeatedly, so the
/// hug state machine derives it exactly once per hug.
pub fn fixed_hug_goal(geometry: &ArmGeometry, cfg: &HugConfig) -> ArmPose {
    geometry.closed_pose(cfg.fixed_close_rad())
}

/// Closing goal used when sizing is enabled: a pose sized for a small user,
/// far enough past any real torso that torque latching, not goal arrival,
/// ends the closure.
pub const SIZING_GOAL_CLOSURE_DEG: f64 = 45.0;

pub fn sizing_hug_goal(geometry: &ArmGeometry) -> ArmPose {
    geometry.closed_pose(SIZING_GOAL_CLOSURE_DEG.to_radians())
}

/// Latch for one monitored joint, set when its torque first crosses the
/// stop threshold during closure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Latch {
    /// Joint angle frozen at the latch instant (rad).
    pub angle: f64,
    /// Latch time (s).
    pub time: f64,
    /// Magnitude of the torque that tripped the latch (Nm).
    pub torque: f64,
}

/// Latch states for the four monitored joints. Once set, a latch holds
/// until the hug ends.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SizingLatches {
    latches: [Option<Latch>; MONITORED_COUNT],
}

impl SizingLatches {
    pub fn get(&self, id: JointId) -> Option<&Latch> {
        let slot = MONITORED_JOINTS.iter().position(|j| *j == id)?;
        self.latches[slot].as_ref()
    }

    pub fn is_latched(&self, id: JointId) -> bool {
        self.get(id).is_some()
    }

    pub fn all_latched(&self) -> bool {
        self.latches.iter().all(Option::is_some)
    }

    pub fn iter(&self) -> impl Iterator<Item = (JointId, &Latch)> {
        MONITORED_JOINTS
            .iter()
            .zip(self.latches.iter())
            .filter_map(|(id, latch)| latch.as_ref().map(|l| (*id, l)))
    }
}

/// Torque stop threshold for a monitored joint (Nm).
pub fn stop_threshold(id: JointId, cfg: &HugConfig) -> f64 {
    if id.is_shoulder_pan() {
        cfg.shoulder_torque_stop
    } else {
        cfg.elbow_torque_stop
    }
}

/// Latches any unlatched monitored joint whose torque magnitude has passed
/// its stop threshold, freezing it at its current angle. Returns the joints
/// newly latched this tick.
pub fn sizing_step(
    latches: &mut SizingLatches,
    joints: &[JointState; JOINT_COUNT],
    cfg: &HugConfig,
    now: f64,
) -> Vec<JointId> {
    let mut newly = Vec::new();
    for (slot, id) in MONITORED_JOINTS.iter().enumerate() {
        if latches.latches[slot].is_some() {
            continue;
        }
        let joint = joints[id.flat()];
        let magnitude = joint.torque.abs();
        if magnitude > stop_threshold(*id, cfg) {
            latches.latches[slot] = Some(Latch {
                angle: joint.angle,
                time: now,
                torque: magnitude,
            });
            newly.push(*id);
        }
    }
    newly
}

/// True when any monitored joint's torque magnitude exceeds the release
/// threshold: the user is pushing back against the arms.
pub fn release_torque_check(joints: &[JointState; JOINT_COUNT], cfg: &HugConfig) -> bool {
    MONITORED_JOINTS
        .iter()
        .any(|id| joints[id.flat()].torque.abs() > cfg.release_torque)
}

/// Per-joint drive command issued every control tick: the reference angle
/// the drive must not pass and the tracking velocity toward it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmCommand {
    pub joint: JointId,
    /// Commanded position (rad). The drive holds here; it never overshoots
    /// its target because the joints are not backdrivable when powered.
    pub target: f64,
    /// Commanded velocity toward the target (rad/s).
    pub velocity: f64,
}

/// PID gains plus the anti-windup bound on the integral accumulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    /// Magnitude bound on the integral accumulator.
    pub integral_limit: f64,
}

impl Default for PidGains {
    fn default() -> Self {
        Self {
            kp: 8.0,
            ki: 0.5,
            kd: 0.2,
            integral_limit: 1.0,
        }
    }
}

/// Positional PID state for one joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidState {
    pub gains: PidGains,
    integral: f64,
    previous_error: f64,
}

impl PidState {
    pub fn new(gains: PidGains) -> Self {
        Self {
            gains,
            integral: 0.0,
            previous_error: 0.0,
        }
    }

    /// Clears accumulated state, used when the reference jumps (e.g. a
    /// sizing latch freezing the reference to the measured angle) so stale
    /// integral and derivative history cannot kick the joint.
    pub fn reset(&mut self) {
        self.integral = 0.0;
        self.previous_error = 0.0;
    }

    pub fn integral(&self) -> f64 {
        self.integral
    }
}

/// One positional PID update on `error = reference - measured`, returning
/// the velocity command (rad/s). The integral accumulates before the output
/// is formed and is clamped to the anti-windup bound.
pub fn pid_step(pid: &mut PidState, reference: f64, measured: f64, dt: f64) -> f64 {
    debug_assert!(dt > 0.0);
    let error = reference - measured;
    let g = pid.gains;
    pid.integral = (pid.integral + error * dt).clamp(-g.integral_limit, g.integral_limit);
    let derivative = (error - pid.previous_error) / dt;
    pid.previous_error = error;
    g.kp * error + g.ki * pid.integral + g.kd * derivative
}
