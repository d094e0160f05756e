//! Back-chamber sensor pipeline: wire-frame parsing, baseline calibration,
//! and hysteresis contact detection.
//!
//! Frames arrive as ASCII lines `HB2,<seq>,<pressure_pa>,<mic>`; the sample
//! timestamp is `seq / haptic_rate`. The first `baseline_sample_count`
//! samples are averaged into a baseline that absorbs the chamber's inflation
//! level, after which a two-threshold automaton tracks squeeze contact:
//! enter at `baseline + contact_start_delta`, leave at
//! `baseline + contact_end_delta`.

use crate::config::HugConfig;
use thiserror::Error;

/// One chamber reading. The mic channel is carried through for traceability
/// but drives no control logic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChamberSample {
    /// Sample time derived from the frame sequence number (s).
    pub timestamp: f64,
    /// Absolute chamber pressure (Pa).
    pub pressure: f64,
    /// Raw microphone amplitude.
    pub mic: u32,
}

#[derive(Debug, Error, PartialEq)]
pub enum ChestError {
    #[error("malformed chamber frame `{line}`: {reason}")]
    Frame { line: String, reason: String },
    #[error("baseline needs exactly {expected} samples, got {got}")]
    BaselineSampleCount { expected: usize, got: usize },
    #[error("chamber frame out of order: t={t} after t={last}")]
    OutOfOrder { t: f64, last: f64 },
}

fn frame_error(line: &str, reason: impl Into<String>) -> ChestError {
    ChestError::Frame {
        line: line.trim_end().to_string(),
        reason: reason.into(),
    }
}

/// Decodes one wire frame. `haptic_rate` converts the sequence counter into
/// the sample timestamp.
pub fn parse_frame(line: &str, haptic_rate: f64) -> Result<ChamberSample, ChestError> {
    let trimmed = line.trim_end_matches(['\r', '\n']);
    let mut fields = trimmed.split(',');
    let tag = fields.next().unwrap_or("");
    if tag != "HB2" {
        return Err(frame_error(line, format!("expected tag HB2, got `{tag}`")));
    }
    let seq_text = fields
        .next()
        .ok_or_else(|| frame_error(line, "missing sequence field"))?;
    let pressure_text = fields
        .next()
        .ok_or_else(|| frame_error(line, "missing pressure field"))?;
    let mic_text = fields
        .next()
        .ok_or_else(|| frame_error(line, "missing mic field"))?;
    if fields.next().is_some() {
        return Err(frame_error(line, "too many fields"));
    }

    let seq: u64 = seq_text
        .parse()
        .map_err(|_| frame_error(line, format!("bad sequence `{seq_text}`")))?;
    let pressure: f64 = pressure_text
        .parse()
        .map_err(|_| frame_error(line, format!("bad pressure `{pressure_text}`")))?;
    if !pressure.is_finite() || pressure < 0.0 {
        return Err(frame_error(
            line,
            format!("pressure out of range `{pressure_text}`"),
        ));
    }
    let mic: u32 = mic_text
        .parse()
        .map_err(|_| frame_error(line, format!("bad mic `{mic_text}`")))?;

    Ok(ChamberSample {
        timestamp: seq as f64 / haptic_rate,
        pressure,
        mic,
    })
}

/// Formats a sample back into its wire line (without the newline).
pub fn format_frame(seq: u64, pressure: f64, mic: u32) -> String {
    format!("HB2,{seq},{pressure},{mic}")
}

/// Per-session reference computed from the first chamber samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baseline {
    /// Mean pressure of the calibration samples (Pa).
    pub pressure_mean: f64,
    /// Mean mic amplitude of the calibration samples.
    pub mic_mean: f64,
    pub sample_count: usize,
}

/// Averages exactly `cfg.baseline_sample_count` samples.
pub fn calibrate_baseline(
    samples: &[ChamberSample],
    cfg: &HugConfig,
) -> Result<Baseline, ChestError> {
    let expected = cfg.baseline_sample_count;
    if samples.len() != expected {
        return Err(ChestError::BaselineSampleCount {
            expected,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let pressure_mean = samples.iter().map(|s| s.pressure).sum::<f64>() / n;
    let mic_mean = samples.iter().map(|s| f64::from(s.mic)).sum::<f64>() / n;
    Ok(Baseline {
        pressure_mean,
        mic_mean,
        sample_count: samples.len(),
    })
}

/// Squeeze-contact automaton state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ContactState {
    #[default]
    NoContact,
    Contact {
        /// Time contact was entered (s).
        since: f64,
    },
}

impl ContactState {
    pub fn in_contact(&self) -> bool {
        matches!(self, ContactState::Contact { .. })
    }
}

/// Advances the two-threshold automaton by one sample. Entry fires at
/// `pressure >= baseline + start delta`, exit at
/// `pressure <= baseline + end delta`; between the thresholds the state
/// holds, which is what keeps the detector from chattering.
pub fn contact_step(
    state: ContactState,
    sample: &ChamberSample,
    baseline: &Baseline,
    cfg: &HugConfig,
) -> ContactState {
    let delta = sample.pressure - baseline.pressure_mean;
    match state {
        ContactState::NoContact => {
            if delta >= cfg.contact_start_delta {
                ContactState::Contact {
                    since: sample.timestamp,
                }
            } else {
                ContactState::NoContact
            }
        }
        ContactState::Contact { since } => {
            if delta <= cfg.contact_end_delta {
                ContactState::NoContact
            } else {
                ContactState::Contact { since }
            }
        }
    }
}

/// Stateful fold over a chamber stream: collects the calibration window,
/// then runs contact detection. One producer feeds it in timestamp order;
/// out-of-order frames are rejected because the serial source is ordered
/// and disorder signals a harness bug.
#[derive(Debug, Default)]
pub struct ChestPipeline {
    calibration: Vec<ChamberSample>,
    baseline: Option<Baseline>,
    contact: ContactState,
    last_timestamp: Option<f64>,
    last_pressure: Option<f64>,
}

impl ChestPipeline {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds one sample. Returns the contact state after the sample.
    pub fn feed(
        &mut self,
        sample: ChamberSample,
        cfg: &HugConfig,
    ) -> Result<ContactState, ChestError> {
        if let Some(last) = self.last_timestamp {
            if sample.timestamp <= last {
                return Err(ChestError::OutOfOrder {
                    t: sample.timestamp,
                    last,
                });
            }
        }
        self.last_timestamp = Some(sample.timestamp);
        self.last_pressure = Some(sample.pressure);

        match self.baseline {
            None => {
                self.calibration.push(sample);
                if self.calibration.len() == cfg.baseline_sample_count {
                    self.baseline = Some(calibrate_baseline(&self.calibration, cfg)?);
                    self.calibration.clear();
                }
                Ok(self.contact)
            }
            Some(baseline) => {
                self.contact = contact_step(self.contact, &sample, &baseline, cfg);
                Ok(self.contact)
            }
        }
    }

    pub fn baseline(&self) -> Option<&Baseline> {
        self.baseline.as_ref()
    }

    pub fn contact(&self) -> ContactState {
        self.contact
    }

    pub fn last_pressure(&self) -> Option<f64> {
        self.last_pressure
    }

    /// Discards the baseline and contact state so the next samples calibrate
    /// afresh, e.g. between users after re-inflating the chamber.
    pub fn recalibrate(&mut self) {
        self.calibration.clear();
        self.baseline = None;
        self.contact = ContactState::NoContact;
    }
}
