//! Person-approach detection over a distance stream.
//!
//! The depth estimate of a tracked person is noisy, so the trigger keeps a
//! sliding window of recent distances and compares the mean of the newer
//! half against the older half: the person counts as approaching only when
//! the newer mean undercuts the older one by `approach_epsilon`. A hug is
//! initiated once an approaching person passes `initiate_distance`, the
//! handover from social to personal space.

use std::collections::VecDeque;

use crate::config::HugConfig;

/// One detection tick. `distance` is `None` when no person is in frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionSample {
    pub timestamp: f64,
    /// Distance to the tracked person (m), present only with a detection.
    pub distance: Option<f64>,
}

impl DetectionSample {
    pub fn person_present(&self) -> bool {
        self.distance.is_some()
    }
}

/// Ring of the most recent person distances. Losing the person clears the
/// ring: approach evidence does not survive the track.
#[derive(Debug, Clone)]
pub struct ApproachWindow {
    distances: VecDeque<f64>,
    capacity: usize,
}

impl ApproachWindow {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "window capacity must be positive");
        Self {
            distances: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.distances.len() == self.capacity
    }

    pub fn distances(&self) -> impl Iterator<Item = f64> + '_ {
        self.distances.iter().copied()
    }

    /// Folds one detection into the window: append the distance (evicting
    /// the oldest at capacity) or clear on a lost person.
    pub fn push_detection(&mut self, sample: &DetectionSample) {
        match sample.distance {
            Some(d) => {
                if self.distances.len() == self.capacity {
                    self.distances.pop_front();
                }
                self.distances.push_back(d);
            }
            None => self.distances.clear(),
        }
    }
}

/// True when a full window shows the mean distance decreasing: the newer
/// half-window mean must undercut the older by `approach_epsilon`.
pub fn is_approaching(window: &ApproachWindow, cfg: &HugConfig) -> bool {
    if !window.is_full() {
        return false;
    }
    let n = window.len();
    let half = n / 2;
    // For odd capacities the middle element belongs to neither half.
    let older: f64 = window.distances().take(half).sum::<f64>() / half as f64;
    let newer: f64 = window.distances().skip(n - half).sum::<f64>() / half as f64;
    newer <= older - cfg.approach_epsilon
}

/// Hug trigger: a present, approaching person inside the initiate distance.
pub fn should_initiate(window: &ApproachWindow, latest: &DetectionSample, cfg: &HugConfig) -> bool {
    match latest.distance {
        Some(d) => is_approaching(window, cfg) && d <= cfg.initiate_distance,
        None => false,
    }
}
