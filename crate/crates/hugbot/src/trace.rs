//! Per-tick trace records: emission, lossless replay, first-divergence
//! diff, and structural validation.
//!
//! A trace file starts with one header line and then carries one record
//! per control tick. Each record line holds, space-separated: the tick
//! time, the phase, twelve joint angles (rad), the four monitored torques
//! (Nm), the chamber pressure (Pa), the person distance (m, `-` when no
//! detection), and the tick's events (`-` when none, `;`-separated
//! otherwise). Floats are serialized with 9 significant digits, which
//! re-parse and re-emit byte-identically.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::arm::{JointId, JOINT_COUNT, MONITORED_COUNT, MONITORED_JOINTS};
use crate::fsm::{ControllerEvent, EventKind, HugPhase, ReleaseCause};

pub const TRACE_HEADER: &str = "# hugbot trace v1";

/// Number of whitespace-separated fields before the events field.
const FIXED_FIELDS: usize = 2 + JOINT_COUNT + MONITORED_COUNT + 2;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// Tick time (s).
    pub t: f64,
    /// Phase after this tick's controller step.
    pub phase: HugPhase,
    /// Measured joint angles, flat-indexed (rad).
    pub angles: [f64; JOINT_COUNT],
    /// Monitored joint torques in `MONITORED_JOINTS` order (Nm).
    pub torques: [f64; MONITORED_COUNT],
    /// Latest chamber pressure (Pa).
    pub pressure: f64,
    /// Latest person distance (m), absent before the first detection or
    /// while nobody is in frame.
    pub distance: Option<f64>,
    /// Events raised this tick.
    pub events: Vec<EventKind>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("cannot read trace: {0}")]
    Io(#[from] std::io::Error),
    #[error("line 1: expected header `{TRACE_HEADER}`")]
    Header,
    #[error("line {line}: {reason}")]
    Record { line: usize, reason: String },
}

fn record_error(line: usize, reason: impl Into<String>) -> TraceError {
    TraceError::Record {
        line,
        reason: reason.into(),
    }
}

/// 9-significant-digit float form used everywhere in trace files.
pub fn format_float(value: f64) -> String {
    format!("{value:.8e}")
}

fn parse_float(text: &str, line: usize, field: &str) -> Result<f64, TraceError> {
    text.parse::<f64>()
        .map_err(|_| record_error(line, format!("bad {field} `{text}`")))
}

fn escape_payload(text: &str) -> String {
    text.replace('\\', "\\\\").replace(';', "\\;")
}

fn unescape_payload(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Splits an event list on unescaped semicolons.
fn split_events(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut current = String::new();
    let mut escaped = false;
    for c in text.chars() {
        if escaped {
            current.push('\\');
            current.push(c);
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == ';' {
            parts.push(std::mem::take(&mut current));
        } else {
            current.push(c);
        }
    }
    if escaped {
        current.push('\\');
    }
    parts.push(current);
    parts
}

pub fn event_token(kind: &EventKind) -> String {
    match kind {
        EventKind::InviteSpeech(text) => format!("invite:{}", escape_payload(text)),
        EventKind::HugStarted => "started".to_string(),
        EventKind::ContactDetected => "contact".to_string(),
        EventKind::SizingLatched(id) => format!("latched:{}", id.label()),
        EventKind::ReleaseTriggered(cause) => format!("release:{}", cause.name()),
        EventKind::HugEnded => "ended".to_string(),
    }
}

pub fn parse_event_token(token: &str, line: usize) -> Result<EventKind, TraceError> {
    if let Some(payload) = token.strip_prefix("invite:") {
        return Ok(EventKind::InviteSpeech(unescape_payload(payload)));
    }
    if let Some(label) = token.strip_prefix("latched:") {
        let id = JointId::parse_label(label)
            .ok_or_else(|| record_error(line, format!("bad joint label `{label}`")))?;
        return Ok(EventKind::SizingLatched(id));
    }
    if let Some(cause) = token.strip_prefix("release:") {
        let cause = ReleaseCause::parse(cause)
            .ok_or_else(|| record_error(line, format!("bad release cause `{cause}`")))?;
        return Ok(EventKind::ReleaseTriggered(cause));
    }
    match token {
        "started" => Ok(EventKind::HugStarted),
        "contact" => Ok(EventKind::ContactDetected),
        "ended" => Ok(EventKind::HugEnded),
        other => Err(record_error(line, format!("unknown event token `{other}`"))),
    }
}

impl TraceRecord {
    pub fn from_tick(
        t: f64,
        phase: HugPhase,
        angles: [f64; JOINT_COUNT],
        torques: [f64; MONITORED_COUNT],
        pressure: f64,
        distance: Option<f64>,
        events: &[ControllerEvent],
    ) -> Self {
        Self {
            t,
            phase,
            angles,
            torques,
            pressure,
            distance,
            events: events.iter().map(|e| e.kind.clone()).collect(),
        }
    }

    pub fn to_line(&self) -> String {
        let mut line = String::with_capacity(320);
        let _ = write!(line, "{} {}", format_float(self.t), self.phase.name());
        for angle in self.angles {
            let _ = write!(line, " {}", format_float(angle));
        }
        for torque in self.torques {
            let _ = write!(line, " {}", format_float(torque));
        }
        let _ = write!(line, " {}", format_float(self.pressure));
        match self.distance {
            Some(d) => {
                let _ = write!(line, " {}", format_float(d));
            }
            None => line.push_str(" -"),
        }
        if self.events.is_empty() {
            line.push_str(" -");
        } else {
            let tokens: Vec<String> = self.events.iter().map(event_token).collect();
            let _ = write!(line, " {}", tokens.join(";"));
        }
        line
    }

    pub fn from_line(line: &str, line_no: usize) -> Result<Self, TraceError> {
        let mut parts = line.splitn(FIXED_FIELDS + 1, ' ');
        let mut next = |field: &str| {
            parts
                .next()
                .ok_or_else(|| record_error(line_no, format!("missing {field}")))
        };

        let t = parse_float(next("time")?, line_no, "time")?;
        let phase_text = next("phase")?;
        let phase = HugPhase::parse(phase_text)
            .ok_or_else(|| record_error(line_no, format!("unknown phase `{phase_text}`")))?;

        let mut angles = [0.0; JOINT_COUNT];
        for (i, slot) in angles.iter_mut().enumerate() {
            *slot = parse_float(next("angle")?, line_no, &format!("angle[{i}]"))?;
        }
        let mut torques = [0.0; MONITORED_COUNT];
        for (i, slot) in torques.iter_mut().enumerate() {
            *slot = parse_float(next("torque")?, line_no, &format!("torque[{i}]"))?;
        }
        let pressure = parse_float(next("pressure")?, line_no, "pressure")?;
        let distance_text = next("distance")?;
        let distance = if distance_text == "-" {
            None
        } else {
            Some(parse_float(distance_text, line_no, "distance")?)
        };

        let events_text = next("events")?;
        let events = if events_text == "-" {
            Vec::new()
        } else {
            split_events(events_text)
                .iter()
                .map(|token| parse_event_token(token, line_no))
                .collect::<Result<_, _>>()?
        };

        Ok(Self {
            t,
            phase,
            angles,
            torques,
            pressure,
            distance,
            events,
        })
    }

    /// Canonical `(field name, serialized value)` pairs used by the differ.
    fn fields(&self) -> Vec<(String, String)> {
        let mut out = Vec::with_capacity(FIXED_FIELDS + 1);
        out.push(("t".to_string(), format_float(self.t)));
        out.push(("phase".to_string(), self.phase.name().to_string()));
        for (i, angle) in self.angles.iter().enumerate() {
            out.push((format!("angle[{i}]"), format_float(*angle)));
        }
        for (i, torque) in self.torques.iter().enumerate() {
            out.push((
                format!("torque[{}]", MONITORED_JOINTS[i].label()),
                format_float(*torque),
            ));
        }
        out.push(("pressure".to_string(), format_float(self.pressure)));
        out.push((
            "distance".to_string(),
            self.distance.map_or("-".to_string(), format_float),
        ));
        let events = if self.events.is_empty() {
            "-".to_string()
        } else {
            self.events
                .iter()
                .map(event_token)
                .collect::<Vec<_>>()
                .join(";")
        };
        out.push(("events".to_string(), events));
        out
    }
}

pub fn trace_to_string(records: &[TraceRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 320);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for record in records {
        out.push_str(&record.to_line());
        out.push('\n');
    }
    out
}

pub fn write_trace(path: &Path, records: &[TraceRecord]) -> Result<(), TraceError> {
    fs::write(path, trace_to_string(records))?;
    Ok(())
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>, TraceError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == TRACE_HEADER => {}
        _ => return Err(TraceError::Header),
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        records.push(TraceRecord::from_line(line, idx + 2)?);
    }
    Ok(records)
}

/// Reads a trace file back into records. Re-emitting the result reproduces
/// the file byte for byte.
pub fn replay_trace(path: &Path) -> Result<Vec<TraceRecord>, TraceError> {
    parse_trace(&fs::read_to_string(path)?)
}

/// Outcome of comparing two traces record by record.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceDiff {
    Identical,
    LengthMismatch {
        left: usize,
        right: usize,
    },
    Divergence {
        /// 0-based record index of the first mismatch.
        index: usize,
        field: String,
        left: String,
        right: String,
    },
}

impl std::fmt::Display for TraceDiff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TraceDiff::Identical => write!(f, "traces identical"),
            TraceDiff::LengthMismatch { left, right } => {
                write!(f, "record counts differ: {left} vs {right}")
            }
            TraceDiff::Divergence {
                index,
                field,
                left,
                right,
            } => write!(
                f,
                "first divergence at record {index}, field {field}: {left} vs {right}"
            ),
        }
    }
}

/// Reports the first field-level divergence between two record streams.
/// Fields are compared in their canonical serialized form.
pub fn diff_traces(left: &[TraceRecord], right: &[TraceRecord]) -> TraceDiff {
    for (index, (a, b)) in left.iter().zip(right.iter()).enumerate() {
        for ((name, av), (_, bv)) in a.fields().into_iter().zip(b.fields()) {
            if av != bv {
                return TraceDiff::Divergence {
                    index,
                    field: name,
                    left: av,
                    right: bv,
                };
            }
        }
    }
    if left.len() != right.len() {
        return TraceDiff::LengthMismatch {
            left: left.len(),
            right: right.len(),
        };
    }
    TraceDiff::Identical
}

/// A structural rule a trace broke, with the offending record index.
#[derive(Debug, Error, PartialEq)]
#[error("record {index}: {rule}")]
pub struct TraceViolation {
    pub index: usize,
    pub rule: String,
}

fn violation(index: usize, rule: impl Into<String>) -> TraceViolation {
    TraceViolation {
        index,
        rule: rule.into(),
    }
}

/// Checks the structural invariants every well-formed run trace obeys:
/// a fixed tick spacing, only legal phase transitions, and exactly one
/// release and one end per started hug, in order.
pub fn validate_trace(records: &[TraceRecord]) -> Result<(), TraceViolation> {
    use HugPhase::*;

    if records.len() >= 2 {
        let dt = records[1].t - records[0].t;
        if dt <= 0.0 {
            return Err(violation(1, "tick time must strictly increase"));
        }
        let tolerance = dt * 1e-6;
        for (i, pair) in records.windows(2).enumerate() {
            let step = pair[1].t - pair[0].t;
            if (step - dt).abs() > tolerance {
                return Err(violation(
                    i + 1,
                    format!("tick spacing {step} deviates from {dt}"),
                ));
            }
        }
    }

    for (i, pair) in records.windows(2).enumerate() {
        let legal = pair[0].phase == pair[1].phase
            || matches!(
                (pair[0].phase, pair[1].phase),
                (Idle, Inviting)
                    | (Inviting, Closing)
                    | (Closing, Embrace)
                    | (Embrace, Releasing)
                    | (Releasing, ReturningHome)
                    | (ReturningHome, Idle)
            )
            // The emergency stop may jump home from any active phase.
            | matches!(pair[0].phase, Inviting | Closing | Embrace if pair[1].phase == ReturningHome);
        if !legal {
            return Err(violation(
                i + 1,
                format!(
                    "illegal phase transition {} -> {}",
                    pair[0].phase.name(),
                    pair[1].phase.name()
                ),
            ));
        }
    }

    let mut hug_open = false;
    let mut released = false;
    for (i, record) in records.iter().enumerate() {
        for event in &record.events {
            match event {
                EventKind::HugStarted => {
                    if hug_open {
                        return Err(violation(i, "HugStarted inside an open hug"));
                    }
                    hug_open = true;
                    released = false;
                }
                EventKind::ReleaseTriggered(_) => {
                    if !hug_open {
                        return Err(violation(i, "ReleaseTriggered outside a hug"));
                    }
                    if released {
                        return Err(violation(i, "second ReleaseTriggered in one hug"));
                    }
                    released = true;
                }
                EventKind::HugEnded => {
                    if !hug_open {
                        return Err(violation(i, "HugEnded outside a hug"));
                    }
                    if !released {
                        return Err(violation(i, "HugEnded without a ReleaseTriggered"));
                    }
                    hug_open = false;
                    released = false;
                }
                _ => {}
            }
        }
    }
    Ok(())
}
