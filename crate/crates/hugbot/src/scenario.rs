//! Scenario files: one closed-loop run described as flat `key = value`
//! lines.
//!
//! A scenario names its mode flags (`flags.*`), the simulated user
//! (`user.*`), plant constants (`plant.*`), any config overrides (plain
//! config keys), a duration limit, and the seed. Values are plain decimal
//! numbers in base units: radians, meters, seconds, pascals, Nm.
//!
//! ```text
//! name = cooperative-full
//! duration = 30
//! seed = 7
//! flags.vision = true
//! flags.sizing = true
//! flags.haptic_release = true
//! key_press_at = 3.0            # fallback if vision never triggers
//! user.girth_contact_angle = 0.1745    # rad, ~10 degrees
//! user.torso_stiffness = 60.0          # Nm/rad
//! user.approach = 0:4.0, 2.2:0.5       # distance vs time (m)
//! user.squeeze = 0:0, 0.3:60000        # chamber delta vs time embraced (Pa)
//! user.release_gesture = hands_off
//! user.release_at = 1.2
//! ```

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::config::{HugConfig, ModeFlags, Violation};
use crate::kv::{Document, Entry, KvError};
use crate::plant::{PiecewiseLinear, PlantParams, ReleaseGesture, UserModel};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] KvError),
    #[error("invalid config after overrides: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidConfig(Vec<Violation>),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

/// One complete closed-loop run: who hugs the robot, with which
/// capabilities, for how long, under which seed.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub flags: ModeFlags,
    pub config: HugConfig,
    pub user: UserModel,
    pub plant: PlantParams,
    /// Simulated-time limit (s); a run that never ends its hug stops here.
    pub duration: f64,
    pub seed: u64,
    /// The user presses the start key at this time if no hug has begun.
    pub key_press_at: Option<f64>,
    /// The emergency stop goes down at this time.
    pub estop_at: Option<f64>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            name: "scenario".to_string(),
            flags: ModeFlags::default(),
            config: HugConfig::default(),
            user: UserModel::cooperative(10f64.to_radians(), 60.0),
            plant: PlantParams::default(),
            duration: 30.0,
            seed: 0,
            key_press_at: None,
            estop_at: None,
        }
    }
}

/// Gesture fields are gathered first and assembled after the whole document
/// is read, so key order cannot matter.
#[derive(Debug, Default)]
struct GestureFields {
    kind: Option<String>,
    at: Option<f64>,
    fade: Option<f64>,
    ramp: Option<f64>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = fs::read_to_string(path)?;
        Self::from_kv_text(&text)
    }

    pub fn from_kv_text(text: &str) -> Result<Self, ScenarioError> {
        let doc = Document::parse(text)?;
        let mut scenario = Scenario::default();
        let mut gesture = GestureFields::default();

        for entry in doc.entries() {
            match entry.key.as_str() {
                "name" => scenario.name = entry.value.clone(),
                "duration" => scenario.duration = entry.as_f64()?,
                "seed" => scenario.seed = entry.as_u64()?,
                "key_press_at" => scenario.key_press_at = Some(entry.as_f64()?),
                "estop_at" => scenario.estop_at = Some(entry.as_f64()?),
                "flags.vision" => scenario.flags.vision = entry.as_bool()?,
                "flags.sizing" => scenario.flags.sizing = entry.as_bool()?,
                "flags.haptic_release" => scenario.flags.haptic_release = entry.as_bool()?,
                key if key.starts_with("user.") => {
                    Self::apply_user_entry(&mut scenario.user, &mut gesture, entry)?
                }
                key if key.starts_with("plant.") => {
                    Self::apply_plant_entry(&mut scenario.plant, entry)?
                }
                key if HugConfig::is_config_key(key) => {
                    scenario.config.apply_entry(entry)?;
                }
                _ => return Err(ScenarioError::Parse(entry.unknown())),
            }
        }

        scenario.user.release_gesture = Self::assemble_gesture(gesture)?;
        scenario.validate()?;
        Ok(scenario)
    }

    fn apply_user_entry(
        user: &mut UserModel,
        gesture: &mut GestureFields,
        entry: &Entry,
    ) -> Result<(), ScenarioError> {
        match entry.key.as_str() {
            "user.girth_contact_angle" => user.girth_contact_angle = entry.as_f64()?,
            "user.torso_stiffness" => user.torso_stiffness = entry.as_f64()?,
            "user.approach" => {
                user.approach = PiecewiseLinear::new(entry.as_breakpoints()?)
                    .map_err(|reason| ScenarioError::Parse(entry.bad(&reason)))?
            }
            "user.squeeze" => {
                user.squeeze = PiecewiseLinear::new(entry.as_breakpoints()?)
                    .map_err(|reason| ScenarioError::Parse(entry.bad(&reason)))?
            }
            "user.release_gesture" => gesture.kind = Some(entry.value.clone()),
            "user.release_at" => gesture.at = Some(entry.as_f64()?),
            "user.release_fade" => gesture.fade = Some(entry.as_f64()?),
            "user.lean_ramp" => gesture.ramp = Some(entry.as_f64()?),
            _ => return Err(ScenarioError::Parse(entry.unknown())),
        }
        Ok(())
    }

    fn apply_plant_entry(plant: &mut PlantParams, entry: &Entry) -> Result<(), ScenarioError> {
        match entry.key.as_str() {
            "plant.tau" => plant.tau = entry.as_f64()?,
            "plant.sigma_depth" => plant.sigma_depth = entry.as_f64()?,
            "plant.sigma_pressure" => plant.sigma_pressure = entry.as_f64()?,
            "plant.ambient_pressure" => plant.ambient_pressure = entry.as_f64()?,
            "plant.detect_range" => plant.detect_range = entry.as_f64()?,
            "plant.hug_range" => plant.hug_range = entry.as_f64()?,
            "plant.mic_level" => plant.mic_level = entry.as_u64()? as u32,
            _ => return Err(ScenarioError::Parse(entry.unknown())),
        }
        Ok(())
    }

    fn assemble_gesture(fields: GestureFields) -> Result<ReleaseGesture, ScenarioError> {
        let kind = fields.kind.as_deref().unwrap_or("hands_off");
        match kind {
            "passive" => {
                if fields.at.is_some() || fields.fade.is_some() || fields.ramp.is_some() {
                    return Err(ScenarioError::Invalid(
                        "release timing fields set but user.release_gesture is passive".to_string(),
                    ));
                }
                Ok(ReleaseGesture::Passive)
            }
            "hands_off" => {
                if fields.ramp.is_some() {
                    return Err(ScenarioError::Invalid(
                        "user.lean_ramp applies only to the lean_back gesture".to_string(),
                    ));
                }
                Ok(ReleaseGesture::HandsOff {
                    at: fields.at.unwrap_or(1.2),
                    fade: fields.fade.unwrap_or(0.25),
                })
            }
            "lean_back" => {
                if fields.fade.is_some() {
                    return Err(ScenarioError::Invalid(
                        "user.release_fade applies only to the hands_off gesture".to_string(),
                    ));
                }
                Ok(ReleaseGesture::LeanBack {
                    at: fields.at.unwrap_or(0.5),
                    ramp: fields.ramp.unwrap_or(40.0),
                })
            }
            other => Err(ScenarioError::Invalid(format!(
                "unknown release gesture `{other}` (expected passive, hands_off, or lean_back)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.config
            .validate()
            .map_err(ScenarioError::InvalidConfig)?;
        self.user.validate().map_err(ScenarioError::Invalid)?;
        if self.duration.is_nan() || self.duration <= 0.0 {
            return Err(ScenarioError::Invalid("duration must be > 0".to_string()));
        }
        if self.plant.tau.is_nan() || self.plant.tau <= 0.0 {
            return Err(ScenarioError::Invalid("plant.tau must be > 0".to_string()));
        }
        if self.plant.sigma_depth < 0.0 || self.plant.sigma_pressure < 0.0 {
            return Err(ScenarioError::Invalid(
                "noise sigmas must be >= 0".to_string(),
            ));
        }
        if !(self.plant.hug_range > 0.0 && self.plant.detect_range > self.plant.hug_range) {
            return Err(ScenarioError::Invalid(
                "need detect_range > hug_range > 0".to_string(),
            ));
        }
        Ok(())
    }

    /// Copy with different flags and seed, used by the condition grid.
    pub fn condition_variant(&self, flags: ModeFlags, seed: u64) -> Scenario {
        Scenario {
            name: format!("{}-{}", self.name, flags.label()),
            flags,
            seed,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = "\
name = full
duration = 12.5
seed = 99
flags.vision = true
flags.sizing = true
flags.haptic_release = true
key_press_at = 3.0
initiate_distance = 2.0
user.girth_contact_angle = 0.26
user.torso_stiffness = 30.0
user.approach = 0:4.0, 2:0.5
user.squeeze = 0:0, 0.4:55000
user.release_gesture = hands_off
user.release_at = 1.5
plant.sigma_depth = 0.01
";

    #[test]
    fn parses_a_full_scenario() {
        let s = Scenario::from_kv_text(FULL).unwrap();
        assert_eq!(s.name, "full");
        assert_eq!(s.duration, 12.5);
        assert_eq!(s.seed, 99);
        assert!(s.flags.vision && s.flags.sizing && s.flags.haptic_release);
        assert_eq!(s.key_press_at, Some(3.0));
        assert_eq!(s.config.initiate_distance, 2.0);
        assert_eq!(s.user.girth_contact_angle, 0.26);
        assert_eq!(s.user.torso_stiffness, 30.0);
        assert_eq!(s.user.approach.points(), &[(0.0, 4.0), (2.0, 0.5)]);
        assert_eq!(
            s.user.release_gesture,
            ReleaseGesture::HandsOff {
                at: 1.5,
                fade: 0.25
            }
        );
        assert_eq!(s.plant.sigma_depth, 0.01);
    }

    #[test]
    fn empty_text_is_the_default_scenario() {
        let s = Scenario::from_kv_text("").unwrap();
        assert_eq!(s.name, "scenario");
        assert_eq!(s.flags, ModeFlags::default());
        assert_eq!(s.config, HugConfig::default());
    }

    #[test]
    fn unknown_keys_fail_in_every_section() {
        for text in [
            "flags.visionn = true\n",
            "user.girth = 0.1\n",
            "plant.tav = 0.1\n",
            "initiate_distanse = 2.0\n",
        ] {
            assert!(Scenario::from_kv_text(text).is_err(), "{text}");
        }
    }

    #[test]
    fn config_overrides_are_validated() {
        let err = Scenario::from_kv_text("contact_end_delta = 60000\n").unwrap_err();
        assert!(matches!(err, ScenarioError::InvalidConfig(_)));
    }

    #[test]
    fn gesture_fields_must_match_the_gesture() {
        let err = Scenario::from_kv_text("user.release_gesture = passive\nuser.release_at = 1.0\n")
            .unwrap_err();
        assert!(matches!(err, ScenarioError::Invalid(_)));

        let err =
            Scenario::from_kv_text("user.release_gesture = lean_back\nuser.release_fade = 1.0\n")
                .unwrap_err();
        assert!(matches!(err, ScenarioError::Invalid(_)));

        let s = Scenario::from_kv_text(
            "user.release_gesture = lean_back\nuser.release_at = 0.6\nuser.lean_ramp = 50\n",
        )
        .unwrap();
        assert_eq!(
            s.user.release_gesture,
            ReleaseGesture::LeanBack {
                at: 0.6,
                ramp: 50.0
            }
        );
    }

    #[test]
    fn gesture_order_does_not_matter() {
        let s = Scenario::from_kv_text("user.release_at = 2.0\nuser.release_gesture = hands_off\n")
            .unwrap();
        assert_eq!(
            s.user.release_gesture,
            ReleaseGesture::HandsOff {
                at: 2.0,
                fade: 0.25
            }
        );
    }

    #[test]
    fn nonpositive_duration_is_invalid() {
        assert!(Scenario::from_kv_text("duration = 0\n").is_err());
    }

    #[test]
    fn condition_variant_renames_and_reseeds() {
        let base = Scenario::from_kv_text("name = grid\nseed = 10\n").unwrap();
        let flags = ModeFlags::from_index(5);
        let v = base.condition_variant(flags, 15);
        assert_eq!(v.name, "grid-VsR");
        assert_eq!(v.seed, 15);
        assert_eq!(v.flags, flags);
        assert_eq!(v.config, base.config);
    }
}
