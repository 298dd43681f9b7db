//! Tracker-data pipeline: arc fitting from marker positions, perturbation
//! stiffness estimation and load-cell trace filtering.

mod filter;
mod fit;
pub mod io;
mod stiffness;
pub mod synthetic;

pub use filter::{moving_average, moving_average_values, peak_failure_force, ForceTrace};
pub use fit::{fit_arc, MarkerSet};
pub use stiffness::{estimate_stiffness, PerturbationRecord, MIN_DELTA_PHI};

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Nominal tracker sampling rate.
pub const TRACKER_RATE_HZ: f64 = 100.0;

/// One tracker frame: base, mid and tip marker positions in the base frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerSample {
    pub time: f64,
    pub markers: MarkerSet,
}

/// A time-ordered run of tracker frames.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackerSequence {
    samples: Vec<TrackerSample>,
}

impl TrackerSequence {
    /// Fails on an empty sequence or non-increasing time stamps.
    pub fn new(samples: Vec<TrackerSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Data("tracker sequence is empty".into()));
        }
        if let Some(i) = samples.windows(2).position(|w| w[1].time.partial_cmp(&w[0].time) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::Data(format!(
                "tracker time not strictly increasing at sample {}",
                i + 1
            )));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[TrackerSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Per-marker mean position over the whole sequence.
    pub fn mean_markers(&self) -> MarkerSet {
        let n = self.samples.len() as f64;
        let mut sum = [Vector3::zeros(); 3];
        for s in &self.samples {
            for (acc, p) in sum.iter_mut().zip(s.markers.as_array()) {
                *acc += p;
            }
        }
        MarkerSet::new(sum[0] / n, sum[1] / n, sum[2] / n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(t: f64, z: f64) -> TrackerSample {
        TrackerSample {
            time: t,
            markers: MarkerSet::new(Vector3::zeros(), Vector3::new(0.0, 0.0, z / 2.0), Vector3::new(0.0, 0.0, z)),
        }
    }

    #[test]
    fn sequence_validation() {
        assert!(TrackerSequence::new(vec![]).is_err());
        assert!(TrackerSequence::new(vec![frame(0.0, 1.0), frame(0.0, 1.0)]).is_err());
        assert!(TrackerSequence::new(vec![frame(0.0, 1.0), frame(0.01, 1.0)]).is_ok());
    }

    #[test]
    fn mean_of_markers() {
        let seq = TrackerSequence::new(vec![frame(0.0, 0.1), frame(0.01, 0.2)]).unwrap();
        let m = seq.mean_markers();
        assert!((m.tip.z - 0.15).abs() < 1e-15);
        assert!((m.mid.z - 0.075).abs() < 1e-15);
    }
}
