//! Deterministic discrete-time models of the robot joints, the chamber,
//! the camera, and a parameterized virtual user.
//!
//! The joint drives track commanded velocity through a first-order lag and
//! hold at their commanded target, mirroring position-controlled arms whose
//! joints are not backdrivable when powered. The virtual user presses a
//! spring torso against closing arms, squeezes the chamber once embraced,
//! and ends the hug by letting go, leaning back, or doing nothing.
//!
//! All randomness comes from per-sensor streams seeded from the scenario
//! seed, so identical (scenario, seed) pairs produce bit-identical runs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::arm::{ArmCommand, ArmGeometry, JointState, JOINT_COUNT};
use crate::chest::format_frame;
use crate::config::HugConfig;
use crate::perception::DetectionSample;

/// Piecewise-linear profile over time: clamped at both ends, interpolated
/// between breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    /// Builds a profile from `(time, value)` breakpoints with strictly
    /// increasing times.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, String> {
        if points.is_empty() {
            return Err("profile needs at least one breakpoint".to_string());
        }
        for pair in points.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(format!(
                    "profile times must strictly increase, got {} then {}",
                    pair[0].0, pair[1].0
                ));
            }
        }
        if points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err("profile breakpoints must be finite".to_string());
        }
        Ok(Self { points })
    }

    pub fn constant(value: f64) -> Self {
        Self {
            points: vec![(0.0, value)],
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, t: f64) -> f64 {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if t <= first.0 {
            return first.1;
        }
        if t >= last.0 {
            return last.1;
        }
        for pair in self.points.windows(2) {
            let (t0, v0) = pair[0];
            let (t1, v1) = pair[1];
            if t <= t1 {
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
        }
        last.1
    }
}

/// How the virtual user ends the embrace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReleaseGesture {
    /// Does nothing; the robot decides (or never releases in haptic mode).
    Passive,
    /// Lets go: the squeeze delta fades to zero over `fade` seconds
    /// starting `at` seconds after the embrace begins.
    HandsOff { at: f64, fade: f64 },
    /// Pushes back on the arms with torque growing at `ramp` Nm/s from
    /// `at` seconds after the embrace begins.
    LeanBack { at: f64, ramp: f64 },
}

/// A simulated hugger.
#[derive(Debug, Clone, PartialEq)]
pub struct UserModel {
    /// Closure angle at which the arms meet the torso (rad). Bigger users
    /// stop the arms earlier, so this shrinks as girth grows.
    pub girth_contact_angle: f64,
    /// Spring constant of the torso against closing arms (Nm/rad).
    pub torso_stiffness: f64,
    /// Person distance from the robot over time (m).
    pub approach: PiecewiseLinear,
    /// Chamber pressure delta over time once embraced (Pa).
    pub squeeze: PiecewiseLinear,
    pub release_gesture: ReleaseGesture,
}

impl UserModel {
    pub fn validate(&self) -> Result<(), String> {
        if self.girth_contact_angle < 0.0 {
            return Err("girth_contact_angle must be >= 0".to_string());
        }
        if self.torso_stiffness.is_nan() || self.torso_stiffness <= 0.0 {
            return Err("torso_stiffness must be > 0".to_string());
        }
        match self.release_gesture {
            ReleaseGesture::HandsOff { at, fade } if at < 0.0 || fade <= 0.0 => {
                Err("hands_off gesture needs at >= 0 and fade > 0".to_string())
            }
            ReleaseGesture::LeanBack { at, ramp } if at < 0.0 || ramp <= 0.0 => {
                Err("lean_back gesture needs at >= 0 and ramp > 0".to_string())
            }
            _ => Ok(()),
        }
    }

    /// Stands at 4 m, never squeezes, never gestures.
    pub fn passive(girth_contact_angle: f64, torso_stiffness: f64) -> Self {
        Self {
            girth_contact_angle,
            torso_stiffness,
            approach: PiecewiseLinear::constant(4.0),
            squeeze: PiecewiseLinear::constant(0.0),
            release_gesture: ReleaseGesture::Passive,
        }
    }

    /// Walks in, squeezes once embraced, and lets go after 1.2 s.
    pub fn cooperative(girth_contact_angle: f64, torso_stiffness: f64) -> Self {
        Self {
            girth_contact_angle,
            torso_stiffness,
            approach: PiecewiseLinear::new(vec![(0.0, 4.0), (2.2, 0.5)]).unwrap(),
            squeeze: PiecewiseLinear::new(vec![(0.0, 0.0), (0.3, 60_000.0)]).unwrap(),
            release_gesture: ReleaseGesture::HandsOff {
                at: 1.2,
                fade: 0.25,
            },
        }
    }
}

/// Spring contact torque magnitude once the arms reach the torso (Nm).
pub fn contact_torque(closure_angle: f64, user: &UserModel) -> f64 {
    user.torso_stiffness * (closure_angle - user.girth_contact_angle).max(0.0)
}

/// Physical constants of the simulated rig.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantParams {
    /// Joint velocity-tracking time constant (s).
    pub tau: f64,
    /// Depth estimate noise, Gaussian sigma (m).
    pub sigma_depth: f64,
    /// Chamber pressure noise, Gaussian sigma (Pa).
    pub sigma_pressure: f64,
    /// Chamber pressure with nobody touching it (Pa).
    pub ambient_pressure: f64,
    /// Person detections drop out beyond this range (m).
    pub detect_range: f64,
    /// The user can touch the robot only inside this range (m).
    pub hug_range: f64,
    /// Flat mic level reported in chamber frames.
    pub mic_level: u32,
}

impl Default for PlantParams {
    fn default() -> Self {
        Self {
            tau: 0.05,
            sigma_depth: 0.03,
            sigma_pressure: 200.0,
            ambient_pressure: 101_325.0,
            detect_range: 6.0,
            hug_range: 0.8,
            mic_level: 512,
        }
    }
}

/// Everything one plant step hands back to the harness.
#[derive(Debug, Clone)]
pub struct PlantOutput {
    /// Joint states at the end of the step.
    pub joints: [JointState; JOINT_COUNT],
    /// Chamber frames that fired during the step, in wire format.
    pub chamber_frames: Vec<String>,
    /// Person detections that fired during the step.
    pub detections: Vec<DetectionSample>,
}

/// Simulated robot, chamber, camera, and their clocks.
#[derive(Debug, Clone)]
pub struct Plant {
    geometry: ArmGeometry,
    params: PlantParams,
    time: f64,
    // The clock is kept as tick_count * dt while the step size stays
    // constant, so long runs cannot drift past sensor sample boundaries.
    ticks: u64,
    pinned_dt: Option<f64>,
    angles: [f64; JOINT_COUNT],
    velocities: [f64; JOINT_COUNT],
    next_chamber_seq: u64,
    next_camera_seq: u64,
    embrace_since: Option<f64>,
    rng_pressure: ChaCha8Rng,
    rng_depth: ChaCha8Rng,
}

const PRESSURE_STREAM_SALT: u64 = 0x68b2_1c03_9d4e_55a7;
const DEPTH_STREAM_SALT: u64 = 0x1f9a_7e44_c6d0_823b;

impl Plant {
    pub fn new(geometry: ArmGeometry, params: PlantParams, seed: u64) -> Self {
        Self {
            angles: geometry.home.0,
            velocities: [0.0; JOINT_COUNT],
            geometry,
            params,
            time: 0.0,
            ticks: 0,
            pinned_dt: None,
            next_chamber_seq: 0,
            next_camera_seq: 0,
            embrace_since: None,
            rng_pressure: ChaCha8Rng::seed_from_u64(seed ^ PRESSURE_STREAM_SALT),
            rng_depth: ChaCha8Rng::seed_from_u64(seed ^ DEPTH_STREAM_SALT),
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn params(&self) -> &PlantParams {
        &self.params
    }

    pub fn geometry(&self) -> &ArmGeometry {
        &self.geometry
    }

    /// Marks the moment the embrace begins; the user's squeeze and release
    /// gestures are timed from here.
    pub fn mark_embrace(&mut self, at: f64) {
        if self.embrace_since.is_none() {
            self.embrace_since = Some(at);
        }
    }

    pub fn clear_embrace(&mut self) {
        self.embrace_since = None;
    }

    /// Joint states (angles and torques) at the current plant time.
    pub fn joint_states(&self, user: &UserModel) -> [JointState; JOINT_COUNT] {
        let user_in_reach = user.approach.eval(self.time) <= self.params.hug_range;
        std::array::from_fn(|flat| {
            let id = crate::arm::flat_joint_id(flat);
            let angle = self.angles[flat];
            let torque = if id.is_monitored() && user_in_reach {
                let closure = self.geometry.closure(id, angle);
                let contact = contact_torque(closure, user);
                let lean = if contact > 0.0 {
                    self.lean_torque(user)
                } else {
                    0.0
                };
                -self.geometry.closing_sign[flat] * (contact + lean)
            } else {
                0.0
            };
            JointState { id, angle, torque }
        })
    }

    fn lean_torque(&self, user: &UserModel) -> f64 {
        let (at, ramp) = match user.release_gesture {
            ReleaseGesture::LeanBack { at, ramp } => (at, ramp),
            _ => return 0.0,
        };
        match self.embrace_since {
            Some(since) => {
                let held = self.time - since - at;
                if held > 0.0 {
                    ramp * held
                } else {
                    0.0
                }
            }
            None => 0.0,
        }
    }

    fn squeeze_delta(&self, user: &UserModel, sample_time: f64) -> f64 {
        let since = match self.embrace_since {
            Some(since) if sample_time >= since => since,
            _ => return 0.0,
        };
        if user.approach.eval(sample_time) > self.params.hug_range {
            return 0.0;
        }
        let held = sample_time - since;
        let base = user.squeeze.eval(held);
        match user.release_gesture {
            ReleaseGesture::HandsOff { at, fade } if held >= at => {
                base * (1.0 - (held - at) / fade).clamp(0.0, 1.0)
            }
            _ => base,
        }
    }

    fn noise(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
        if sigma > 0.0 {
            Normal::new(0.0, sigma).unwrap().sample(rng)
        } else {
            0.0
        }
    }

    /// Advances the simulation by `dt` under the given joint commands,
    /// returning the new joint states and any sensor samples whose times
    /// fall in `[t, t + dt)`. A zero `dt` is an identity step.
    pub fn step(
        &mut self,
        commands: &[ArmCommand; JOINT_COUNT],
        user: &UserModel,
        cfg: &HugConfig,
        dt: f64,
    ) -> PlantOutput {
        if dt > 0.0 {
            let t_end = match self.pinned_dt {
                None => {
                    self.pinned_dt = Some(dt);
                    (self.ticks + 1) as f64 * dt
                }
                Some(pinned) if pinned == dt => (self.ticks + 1) as f64 * dt,
                // A changed step size unpins and accumulates from then on.
                Some(_) => {
                    self.pinned_dt = Some(f64::NAN);
                    self.time + dt
                }
            };
            self.ticks += 1;
            let blend = 1.0 - (-dt / self.params.tau).exp();
            for command in commands {
                let flat = command.joint.flat();
                let commanded = command.velocity.clamp(-cfg.joint_speed, cfg.joint_speed);
                let velocity = self.velocities[flat] + blend * (commanded - self.velocities[flat]);
                let proposed = self.angles[flat] + velocity * dt;
                let before = self.angles[flat] - command.target;
                let after = proposed - command.target;
                if before * after <= 0.0 {
                    // The drive reached (or would pass) its target: hold there.
                    self.angles[flat] = command.target;
                    self.velocities[flat] = 0.0;
                } else {
                    self.angles[flat] = proposed;
                    self.velocities[flat] = velocity;
                }
            }
            self.time = t_end;
        }

        let mut chamber_frames = Vec::new();
        while (self.next_chamber_seq as f64) / cfg.haptic_rate < self.time {
            let seq = self.next_chamber_seq;
            let sample_time = seq as f64 / cfg.haptic_rate;
            let noise = Self::noise(&mut self.rng_pressure, self.params.sigma_pressure);
            let pressure =
                (self.params.ambient_pressure + self.squeeze_delta(user, sample_time) + noise)
                    .max(0.0);
            chamber_frames.push(format_frame(seq, pressure, self.params.mic_level));
            self.next_chamber_seq += 1;
        }

        let mut detections = Vec::new();
        while (self.next_camera_seq as f64) / cfg.camera_rate < self.time {
            let sample_time = self.next_camera_seq as f64 / cfg.camera_rate;
            let true_distance = user.approach.eval(sample_time);
            let distance = if true_distance <= self.params.detect_range {
                let noisy =
                    true_distance + Self::noise(&mut self.rng_depth, self.params.sigma_depth);
                Some(noisy.max(0.05))
            } else {
                None
            };
            detections.push(DetectionSample {
                timestamp: sample_time,
                distance,
            });
            self.next_camera_seq += 1;
        }

        PlantOutput {
            joints: self.joint_states(user),
            chamber_frames,
            detections,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arm::{flat_joint_id, Arm, JointId, MONITORED_JOINTS};
    use crate::chest::parse_frame;
    use approx::assert_relative_eq;

    fn hold_commands(plant: &Plant) -> [ArmCommand; JOINT_COUNT] {
        std::array::from_fn(|flat| ArmCommand {
            joint: flat_joint_id(flat),
            target: plant.angles[flat],
            velocity: 0.0,
        })
    }

    fn close_commands(
        target_closure: f64,
        geometry: &ArmGeometry,
        speed: f64,
    ) -> [ArmCommand; JOINT_COUNT] {
        let pose = geometry.closed_pose(target_closure);
        std::array::from_fn(|flat| {
            let sign = geometry.closing_sign[flat];
            ArmCommand {
                joint: flat_joint_id(flat),
                target: pose.0[flat],
                velocity: speed * sign,
            }
        })
    }

    fn quiet_params() -> PlantParams {
        PlantParams {
            sigma_depth: 0.0,
            sigma_pressure: 0.0,
            ..PlantParams::default()
        }
    }

    #[test]
    fn profile_interpolates_and_clamps() {
        let p = PiecewiseLinear::new(vec![(0.0, 4.0), (2.0, 1.0)]).unwrap();
        assert_eq!(p.eval(-1.0), 4.0);
        assert_eq!(p.eval(0.0), 4.0);
        assert_relative_eq!(p.eval(1.0), 2.5);
        assert_eq!(p.eval(2.0), 1.0);
        assert_eq!(p.eval(9.0), 1.0);
        assert!(PiecewiseLinear::new(vec![(1.0, 0.0), (1.0, 2.0)]).is_err());
        assert!(PiecewiseLinear::new(vec![]).is_err());
    }

    #[test]
    fn contact_torque_is_a_one_sided_spring() {
        let user = UserModel::passive(0.3, 25.0);
        assert_eq!(contact_torque(0.3, &user), 0.0);
        assert_eq!(contact_torque(0.1, &user), 0.0);
        assert_relative_eq!(contact_torque(0.5, &user), 5.0, max_relative = 1e-12);
    }

    #[test]
    fn zero_dt_step_is_identity() {
        let cfg = HugConfig::default();
        let user = UserModel::passive(0.2, 25.0);
        let mut plant = Plant::new(ArmGeometry::default(), PlantParams::default(), 3);
        let before_angles = plant.angles;
        let before_time = plant.time;
        let commands = close_commands(0.5, &ArmGeometry::default(), 0.6);
        let out = plant.step(&commands, &user, &cfg, 0.0);
        assert_eq!(plant.angles, before_angles);
        assert_eq!(plant.time, before_time);
        assert!(out.chamber_frames.is_empty());
        assert!(out.detections.is_empty());
    }

    #[test]
    fn quiet_passive_plant_holds_steady() {
        let cfg = HugConfig::default();
        let user = UserModel::passive(0.2, 25.0);
        let mut plant = Plant::new(ArmGeometry::default(), quiet_params(), 3);
        let hold = hold_commands(&plant);
        let mut pressures = Vec::new();
        let mut distances = Vec::new();
        for _ in 0..200 {
            let out = plant.step(&hold, &user, &cfg, cfg.dt());
            assert!(out.joints.iter().all(|j| j.angle == 0.0 && j.torque == 0.0));
            for frame in &out.chamber_frames {
                pressures.push(parse_frame(frame, cfg.haptic_rate).unwrap().pressure);
            }
            for d in &out.detections {
                distances.push(d.distance.unwrap());
            }
        }
        assert!(!pressures.is_empty() && !distances.is_empty());
        assert!(pressures.iter().all(|&p| p == 101_325.0));
        assert!(distances.iter().all(|&d| d == 4.0));
    }

    #[test]
    fn identical_seeds_yield_identical_streams() {
        let cfg = HugConfig::default();
        let user = UserModel::cooperative(10f64.to_radians(), 60.0);
        let run = |seed: u64| {
            let mut plant = Plant::new(ArmGeometry::default(), PlantParams::default(), seed);
            let commands = close_commands(0.4, &ArmGeometry::default(), 0.6);
            let mut frames = Vec::new();
            let mut detections = Vec::new();
            let mut angles = Vec::new();
            for _ in 0..300 {
                let out = plant.step(&commands, &user, &cfg, cfg.dt());
                frames.extend(out.chamber_frames);
                detections.extend(out.detections);
                angles.push(out.joints.map(|j| j.angle));
            }
            (frames, detections, angles)
        };
        assert_eq!(run(42), run(42));
        let (a, _, _) = run(42);
        let (b, _, _) = run(43);
        assert_ne!(a, b, "different seeds must diverge in the noise");
    }

    #[test]
    fn closure_ramp_torque_matches_the_spring_oracle() {
        let cfg = HugConfig::default();
        let girth = 10f64.to_radians();
        let user = UserModel {
            approach: PiecewiseLinear::constant(0.5),
            ..UserModel::passive(girth, 25.0)
        };
        let geometry = ArmGeometry::default();
        let mut plant = Plant::new(geometry, quiet_params(), 9);
        let commands = close_commands(0.45, &geometry, 0.6);
        for _ in 0..120 {
            let out = plant.step(&commands, &user, &cfg, cfg.dt());
            for id in MONITORED_JOINTS {
                let joint = out.joints[id.flat()];
                let closure = geometry.closure(id, joint.angle);
                let expected = 25.0 * (closure - girth).max(0.0);
                assert_relative_eq!(joint.torque.abs(), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn torque_needs_the_user_in_reach() {
        let cfg = HugConfig::default();
        let geometry = ArmGeometry::default();
        // Standing at 4 m: closing on air produces no torque.
        let user = UserModel::passive(0.05, 60.0);
        let mut plant = Plant::new(geometry, quiet_params(), 9);
        let commands = close_commands(0.45, &geometry, 0.6);
        for _ in 0..150 {
            let out = plant.step(&commands, &user, &cfg, cfg.dt());
            assert!(out.joints.iter().all(|j| j.torque == 0.0));
        }
    }

    #[test]
    fn velocity_lag_and_target_hold() {
        let cfg = HugConfig::default();
        let user = UserModel::passive(1.0, 25.0);
        let geometry = ArmGeometry::default();
        let mut plant = Plant::new(geometry, quiet_params(), 5);
        let left2 = JointId::new(Arm::Left, 2).flat();
        let commands = close_commands(0.012, &geometry, 0.6);

        // First tick: velocity is still spinning up through the lag.
        plant.step(&commands, &user, &cfg, cfg.dt());
        let first_tick = plant.angles[left2];
        assert!(first_tick > 0.0 && first_tick < 0.6 * cfg.dt());

        // The drive reaches its 0.012 rad target and holds exactly there.
        for _ in 0..100 {
            plant.step(&commands, &user, &cfg, cfg.dt());
        }
        assert_eq!(plant.angles[left2], 0.012);
        assert_eq!(plant.velocities[left2], 0.0);
    }

    #[test]
    fn commanded_velocity_is_capped_at_joint_speed() {
        let cfg = HugConfig::default();
        let user = UserModel::passive(1.0, 25.0);
        let geometry = ArmGeometry::default();
        let mut plant = Plant::new(geometry, quiet_params(), 5);
        let left2 = JointId::new(Arm::Left, 2).flat();
        let mut commands = close_commands(2.0, &geometry, 0.6);
        commands[left2].velocity = 50.0;
        let mut previous = 0.0;
        for _ in 0..200 {
            plant.step(&commands, &user, &cfg, cfg.dt());
            let moved = plant.angles[left2] - previous;
            assert!(moved <= cfg.joint_speed * cfg.dt() + 1e-12);
            previous = plant.angles[left2];
        }
    }

    #[test]
    fn chamber_and_camera_fire_at_their_rates() {
        let cfg = HugConfig::default();
        let user = UserModel::passive(0.2, 25.0);
        let mut plant = Plant::new(ArmGeometry::default(), quiet_params(), 3);
        let hold = hold_commands(&plant);
        let mut frames = 0usize;
        let mut detections = 0usize;
        let ticks = 100; // exactly one second at the default control rate
        for _ in 0..ticks {
            let out = plant.step(&hold, &user, &cfg, cfg.dt());
            frames += out.chamber_frames.len();
            detections += out.detections.len();
        }
        assert_eq!(frames, 45);
        assert_eq!(detections, 30);
    }

    #[test]
    fn squeeze_follows_the_profile_after_embrace() {
        let cfg = HugConfig::default();
        let user = UserModel {
            approach: PiecewiseLinear::constant(0.4),
            ..UserModel::cooperative(0.2, 60.0)
        };
        let mut plant = Plant::new(ArmGeometry::default(), quiet_params(), 3);
        let hold = hold_commands(&plant);

        // Before the embrace the chamber sits at ambient.
        for _ in 0..50 {
            let out = plant.step(&hold, &user, &cfg, cfg.dt());
            for frame in &out.chamber_frames {
                assert_eq!(
                    parse_frame(frame, cfg.haptic_rate).unwrap().pressure,
                    101_325.0
                );
            }
        }
        let embrace_at = plant.time();
        plant.mark_embrace(embrace_at);
        let mut last_pressure = 0.0;
        for _ in 0..50 {
            let out = plant.step(&hold, &user, &cfg, cfg.dt());
            for frame in &out.chamber_frames {
                let sample = parse_frame(frame, cfg.haptic_rate).unwrap();
                let expected = 101_325.0 + user.squeeze.eval(sample.timestamp - embrace_at);
                assert_relative_eq!(sample.pressure, expected, epsilon = 1e-9);
                last_pressure = sample.pressure;
            }
        }
        assert!(last_pressure > 101_325.0 + 50_000.0);
    }

    #[test]
    fn lean_back_torque_ramps_from_gesture_onset() {
        let cfg = HugConfig::default();
        let girth = 10f64.to_radians();
        let user = UserModel {
            approach: PiecewiseLinear::constant(0.4),
            release_gesture: ReleaseGesture::LeanBack {
                at: 0.5,
                ramp: 40.0,
            },
            ..UserModel::passive(girth, 25.0)
        };
        let geometry = ArmGeometry::default();
        let mut plant = Plant::new(geometry, quiet_params(), 3);
        // Close to 20 degrees so the arms rest on the torso, then hold.
        let commands = close_commands(20f64.to_radians(), &geometry, 0.6);
        for _ in 0..250 {
            plant.step(&commands, &user, &cfg, cfg.dt());
        }
        plant.mark_embrace(plant.time());
        let onset = plant.time() + 0.5;
        let elbow = JointId::new(Arm::Left, 3).flat();
        let contact_only = plant.joint_states(&user)[elbow].torque.abs();
        for _ in 0..120 {
            let out = plant.step(&commands, &user, &cfg, cfg.dt());
            let torque = out.joints[elbow].torque.abs();
            let expected_lean = (40.0 * (plant.time() - onset)).max(0.0);
            assert_relative_eq!(torque, contact_only + expected_lean, epsilon = 1e-9);
        }
    }
}
