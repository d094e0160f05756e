//! Controller configuration: every tunable threshold in one validated record.
//!
//! All quantities carry their unit in the field name docs and are stored in
//! base units (Pa, Nm, m, s, Hz, rad/s) except `fixed_close_angle`, which is
//! kept in degrees because that is how hug closure poses are specified.

use crate::kv::{Document, KvError};
use thiserror::Error;

/// Tunable thresholds and rates for the hugging controller and its sensors.
#[derive(Debug, Clone, PartialEq)]
pub struct HugConfig {
    /// Closing torque at which a shoulder-pan joint stops during sizing (Nm).
    pub shoulder_torque_stop: f64,
    /// Closing torque at which an elbow-flex joint stops during sizing (Nm).
    pub elbow_torque_stop: f64,
    /// Torque on any monitored joint that triggers release (Nm).
    pub release_torque: f64,
    /// Chamber pressure rise above baseline that starts contact (Pa).
    pub contact_start_delta: f64,
    /// Chamber pressure delta above baseline at which contact ends (Pa).
    pub contact_end_delta: f64,
    /// Number of initial chamber samples averaged into the baseline.
    pub baseline_sample_count: usize,
    /// Chamber sensor sample rate (Hz).
    pub haptic_rate: f64,
    /// Person-detection sample rate (Hz).
    pub camera_rate: f64,
    /// Distance at which an approaching person triggers a hug (m).
    pub initiate_distance: f64,
    /// Closure of joints 2 and 3 for the one-size-fits-most hug (degrees).
    pub fixed_close_angle: f64,
    /// Delay between full closure and release in timed mode (s).
    pub timed_release_delay: f64,
    /// Number of recent distance readings in the approach window.
    pub approach_window_len: usize,
    /// Margin by which the newer half-window mean must undercut the older (m).
    pub approach_epsilon: f64,
    /// Fixed angular velocity of joint motion references (rad/s).
    pub joint_speed: f64,
    /// Controller tick rate (Hz).
    pub control_rate: f64,
}

impl Default for HugConfig {
    fn default() -> Self {
        Self {
            shoulder_torque_stop: 10.0,
            elbow_torque_stop: 5.0,
            release_torque: 20.0,
            contact_start_delta: 50_000.0,
            contact_end_delta: 10_000.0,
            baseline_sample_count: 20,
            haptic_rate: 45.0,
            camera_rate: 30.0,
            initiate_distance: 2.45,
            fixed_close_angle: 20.0,
            timed_release_delay: 1.0,
            approach_window_len: 20,
            approach_epsilon: 0.06,
            // Slow arms: a walking user reaches the torso before the
            // closing sweep passes their girth angle.
            joint_speed: 0.2,
            control_rate: 100.0,
        }
    }
}

/// A violated config invariant: a stable name plus a human-readable detail.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.invariant, self.detail)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Parse(#[from] KvError),
    #[error("invalid config: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl HugConfig {
    /// Checks every invariant and returns all violations, not just the first.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        if !(self.contact_start_delta > self.contact_end_delta && self.contact_end_delta > 0.0) {
            violations.push(Violation {
                invariant: "hysteresis must be open",
                detail: format!(
                    "contact_start_delta ({}) must exceed contact_end_delta ({}) and both must be positive",
                    self.contact_start_delta, self.contact_end_delta
                ),
            });
        }
        if !(self.release_torque > self.shoulder_torque_stop
            && self.release_torque > self.elbow_torque_stop)
        {
            violations.push(Violation {
                invariant: "release above stop thresholds",
                detail: format!(
                    "release_torque ({}) must exceed shoulder_torque_stop ({}) and elbow_torque_stop ({})",
                    self.release_torque, self.shoulder_torque_stop, self.elbow_torque_stop
                ),
            });
        }
        let positives = [
            ("shoulder_torque_stop", self.shoulder_torque_stop),
            ("elbow_torque_stop", self.elbow_torque_stop),
            ("release_torque", self.release_torque),
            ("haptic_rate", self.haptic_rate),
            ("camera_rate", self.camera_rate),
            ("initiate_distance", self.initiate_distance),
            ("timed_release_delay", self.timed_release_delay),
            ("approach_epsilon", self.approach_epsilon),
            ("joint_speed", self.joint_speed),
            ("control_rate", self.control_rate),
        ];
        for (name, value) in positives {
            if value.is_nan() || value <= 0.0 {
                violations.push(Violation {
                    invariant: "strictly positive",
                    detail: format!("{name} must be > 0, got {value}"),
                });
            }
        }
        if self.baseline_sample_count == 0 {
            violations.push(Violation {
                invariant: "strictly positive",
                detail: "baseline_sample_count must be > 0".to_string(),
            });
        }
        if self.approach_window_len == 0 {
            violations.push(Violation {
                invariant: "strictly positive",
                detail: "approach_window_len must be > 0".to_string(),
            });
        }
        if !(self.fixed_close_angle > 0.0 && self.fixed_close_angle < 90.0) {
            violations.push(Violation {
                invariant: "fixed close angle range",
                detail: format!(
                    "fixed_close_angle must lie in (0, 90) degrees, got {}",
                    self.fixed_close_angle
                ),
            });
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Loads a config document. Unset keys fall back to defaults; unknown
    /// keys are a hard error so threshold typos cannot vanish silently.
    pub fn from_kv_text(text: &str) -> Result<Self, ConfigError> {
        let doc = Document::parse(text)?;
        let mut cfg = Self::default();
        for entry in doc.entries() {
            cfg.apply_entry(entry)?;
        }
        cfg.validate().map_err(ConfigError::Invalid)?;
        Ok(cfg)
    }

    /// Applies one `key = value` override. Shared with scenario parsing,
    /// where config keys appear alongside `flags.*` and `user.*` keys.
    pub(crate) fn apply_entry(&mut self, entry: &crate::kv::Entry) -> Result<(), KvError> {
        match entry.key.as_str() {
            "shoulder_torque_stop" => self.shoulder_torque_stop = entry.as_f64()?,
            "elbow_torque_stop" => self.elbow_torque_stop = entry.as_f64()?,
            "release_torque" => self.release_torque = entry.as_f64()?,
            "contact_start_delta" => self.contact_start_delta = entry.as_f64()?,
            "contact_end_delta" => self.contact_end_delta = entry.as_f64()?,
            "baseline_sample_count" => self.baseline_sample_count = entry.as_usize()?,
            "haptic_rate" => self.haptic_rate = entry.as_f64()?,
            "camera_rate" => self.camera_rate = entry.as_f64()?,
            "initiate_distance" => self.initiate_distance = entry.as_f64()?,
            "fixed_close_angle" => self.fixed_close_angle = entry.as_f64()?,
            "timed_release_delay" => self.timed_release_delay = entry.as_f64()?,
            "approach_window_len" => self.approach_window_len = entry.as_usize()?,
            "approach_epsilon" => self.approach_epsilon = entry.as_f64()?,
            "joint_speed" => self.joint_speed = entry.as_f64()?,
            "control_rate" => self.control_rate = entry.as_f64()?,
            _ => return Err(entry.unknown()),
        }
        Ok(())
    }

    pub(crate) fn is_config_key(key: &str) -> bool {
        matches!(
            key,
            "shoulder_torque_stop"
                | "elbow_torque_stop"
                | "release_torque"
                | "contact_start_delta"
                | "contact_end_delta"
                | "baseline_sample_count"
                | "haptic_rate"
                | "camera_rate"
                | "initiate_distance"
                | "fixed_close_angle"
                | "timed_release_delay"
                | "approach_window_len"
                | "approach_epsilon"
                | "joint_speed"
                | "control_rate"
        )
    }

    /// Serializes to the same flat dialect `from_kv_text` reads. Reloading
    /// the output reproduces the config exactly.
    pub fn to_kv_text(&self) -> String {
        format!(
            "shoulder_torque_stop = {}\n\
             elbow_torque_stop = {}\n\
             release_torque = {}\n\
             contact_start_delta = {}\n\
             contact_end_delta = {}\n\
             baseline_sample_count = {}\n\
             haptic_rate = {}\n\
             camera_rate = {}\n\
             initiate_distance = {}\n\
             fixed_close_angle = {}\n\
             timed_release_delay = {}\n\
             approach_window_len = {}\n\
             approach_epsilon = {}\n\
             joint_speed = {}\n\
             control_rate = {}\n",
            self.shoulder_torque_stop,
            self.elbow_torque_stop,
            self.release_torque,
            self.contact_start_delta,
            self.contact_end_delta,
            self.baseline_sample_count,
            self.haptic_rate,
            self.camera_rate,
            self.initiate_distance,
            self.fixed_close_angle,
            self.timed_release_delay,
            self.approach_window_len,
            self.approach_epsilon,
            self.joint_speed,
            self.control_rate,
        )
    }

    /// Controller tick length (s).
    pub fn dt(&self) -> f64 {
        1.0 / self.control_rate
    }

    /// One-size-fits-most closure in radians.
    pub fn fixed_close_rad(&self) -> f64 {
        self.fixed_close_angle.to_radians()
    }
}

/// The three binary capabilities toggled across hugging conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModeFlags {
    /// Initiate hugs from the person-approach detector.
    pub vision: bool,
    /// Stop each monitored joint on its torque threshold while closing.
    pub sizing: bool,
    /// Release on chamber contact loss or torque instead of a fixed timer.
    pub haptic_release: bool,
}

impl ModeFlags {
    pub const COUNT: usize = 8;

    pub fn all() -> [ModeFlags; Self::COUNT] {
        std::array::from_fn(ModeFlags::from_index)
    }

    /// Condition index with vision as the high bit and release as the low.
    pub fn index(&self) -> usize {
        (self.vision as usize) << 2 | (self.sizing as usize) << 1 | self.haptic_release as usize
    }

    pub fn from_index(index: usize) -> Self {
        Self {
            vision: index & 0b100 != 0,
            sizing: index & 0b010 != 0,
            haptic_release: index & 0b001 != 0,
        }
    }

    /// Three-letter condition label; uppercase marks an enabled capability
    /// (`vsr` = none, `VSR` = all).
    pub fn label(&self) -> String {
        let mut s = String::with_capacity(3);
        s.push(if self.vision { 'V' } else { 'v' });
        s.push(if self.sizing { 'S' } else { 's' });
        s.push(if self.haptic_release { 'R' } else { 'r' });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_hold_documented_thresholds() {
        let cfg = HugConfig::default();
        assert_eq!(cfg.shoulder_torque_stop, 10.0);
        assert_eq!(cfg.elbow_torque_stop, 5.0);
        assert_eq!(cfg.release_torque, 20.0);
        assert_eq!(cfg.contact_start_delta, 50_000.0);
        assert_eq!(cfg.contact_end_delta, 10_000.0);
        assert_eq!(cfg.baseline_sample_count, 20);
        assert_eq!(cfg.haptic_rate, 45.0);
        assert_eq!(cfg.initiate_distance, 2.45);
        assert_eq!(cfg.fixed_close_angle, 20.0);
        assert_eq!(cfg.timed_release_delay, 1.0);
    }

    #[test]
    fn defaults_validate() {
        assert!(HugConfig::default().validate().is_ok());
    }

    #[test]
    fn closed_hysteresis_is_rejected() {
        let cfg = HugConfig {
            contact_end_delta: 60_000.0,
            ..HugConfig::default()
        };
        let violations = cfg.validate().unwrap_err();
        assert!(violations
            .iter()
            .any(|v| v.invariant == "hysteresis must be open"));
    }

    #[test]
    fn release_below_stops_is_rejected() {
        let cfg = HugConfig {
            release_torque: 5.0,
            ..HugConfig::default()
        };
        let violations = cfg.validate().unwrap_err();
        assert!(violations
            .iter()
            .any(|v| v.invariant == "release above stop thresholds"));
    }

    #[test]
    fn nonpositive_rate_is_rejected() {
        let cfg = HugConfig {
            camera_rate: 0.0,
            ..HugConfig::default()
        };
        let violations = cfg.validate().unwrap_err();
        assert!(violations
            .iter()
            .any(|v| v.invariant == "strictly positive"));
    }

    #[test]
    fn close_angle_must_stay_under_ninety() {
        let cfg = HugConfig {
            fixed_close_angle: 90.0,
            ..HugConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn empty_document_is_the_default() {
        assert_eq!(HugConfig::from_kv_text("").unwrap(), HugConfig::default());
    }

    #[test]
    fn single_override_changes_one_field() {
        let cfg = HugConfig::from_kv_text("initiate_distance = 3.0\n").unwrap();
        assert_eq!(cfg.initiate_distance, 3.0);
        let rest = HugConfig {
            initiate_distance: HugConfig::default().initiate_distance,
            ..cfg
        };
        assert_eq!(rest, HugConfig::default());
    }

    #[test]
    fn unknown_key_is_a_hard_error() {
        let err = HugConfig::from_kv_text("initiate_distanse = 3.0\n").unwrap_err();
        match err {
            ConfigError::Parse(KvError::UnknownKey { key, .. }) => {
                assert_eq!(key, "initiate_distanse");
            }
            other => panic!("expected unknown-key error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_document_reports_violations() {
        let err = HugConfig::from_kv_text("contact_end_delta = 60000\n").unwrap_err();
        assert!(matches!(err, ConfigError::Invalid(_)));
    }

    #[test]
    fn kv_round_trip_is_identity() {
        let cfg = HugConfig {
            initiate_distance: 2.4500000001,
            joint_speed: 0.123456789123,
            ..HugConfig::default()
        };
        let reloaded = HugConfig::from_kv_text(&cfg.to_kv_text()).unwrap();
        assert_eq!(reloaded, cfg);
    }

    proptest::proptest! {
        /// Any valid config survives the serialize/reload round trip intact.
        #[test]
        fn any_valid_config_round_trips(
            shoulder in 6.0f64..50.0,
            elbow in 1.0f64..5.9,
            release in 51.0f64..200.0,
            start in 20_000.0f64..90_000.0,
            end in 1.0f64..19_999.0,
            samples in 1usize..200,
            speed in 0.01f64..3.0,
            angle in 1.0f64..89.0,
        ) {
            let cfg = HugConfig {
                shoulder_torque_stop: shoulder,
                elbow_torque_stop: elbow,
                release_torque: release,
                contact_start_delta: start,
                contact_end_delta: end,
                baseline_sample_count: samples,
                joint_speed: speed,
                fixed_close_angle: angle,
                ..HugConfig::default()
            };
            proptest::prop_assume!(cfg.validate().is_ok());
            let reloaded = HugConfig::from_kv_text(&cfg.to_kv_text()).unwrap();
            proptest::prop_assert_eq!(reloaded, cfg);
        }
    }

    #[test]
    fn flag_indices_enumerate_all_conditions() {
        let labels: Vec<String> = ModeFlags::all().iter().map(|f| f.label()).collect();
        assert_eq!(labels.len(), 8);
        assert_eq!(labels[0], "vsr");
        assert_eq!(labels[7], "VSR");
        for (i, flags) in ModeFlags::all().iter().enumerate() {
            assert_eq!(flags.index(), i);
        }
        let unique: std::collections::BTreeSet<_> = labels.iter().collect();
        assert_eq!(unique.len(), 8);
    }
}
