//! Synthetic tracker data generated from the forward kinematics, used for
//! fixtures and for checking the estimation pipeline end to end.

use nalgebra::Vector3;

use crate::arc::{ArcParams, RobotGeometry};
use crate::error::Result;
use crate::kinematics::pose_at;

use super::{MarkerSet, PerturbationRecord, TrackerSample, TrackerSequence, TRACKER_RATE_HZ};

/// Noise-free marker positions at arc fractions 0, 0.5 and 1.
pub fn markers_for_arc(arc: &ArcParams, geom: &RobotGeometry) -> Result<MarkerSet> {
    let p = |xi| pose_at(arc, xi, geom).map(|pose| pose.position);
    Ok(MarkerSet::new(p(0.0)?, p(0.5)?, p(1.0)?))
}

/// `n` frames at the nominal tracker rate starting at `t0`, with `noise()`
/// added independently to every marker of every frame.
pub fn steady_sequence(
    arc: &ArcParams,
    geom: &RobotGeometry,
    n: usize,
    t0: f64,
    noise: &mut dyn FnMut() -> Vector3<f64>,
) -> Result<TrackerSequence> {
    let clean = markers_for_arc(arc, geom)?;
    let samples = (0..n)
        .map(|i| TrackerSample {
            time: t0 + i as f64 / TRACKER_RATE_HZ,
            markers: MarkerSet::new(clean.base + noise(), clean.mid + noise(), clean.tip + noise()),
        })
        .collect();
    TrackerSequence::new(samples)
}

/// A planar perturbation test on a linear spring: the section sits at
/// `baseline` and deflects by `delta_torque / stiffness` in the same plane.
pub fn linear_spring_record(
    baseline: &ArcParams,
    stiffness: f64,
    delta_torque: f64,
    geom: &RobotGeometry,
    samples_per_phase: usize,
    noise: &mut dyn FnMut() -> Vector3<f64>,
) -> Result<PerturbationRecord> {
    let deflected = ArcParams::new(baseline.phi() + delta_torque / stiffness, baseline.theta())?;
    let before = steady_sequence(baseline, geom, samples_per_phase, 0.0, noise)?;
    let t1 = samples_per_phase as f64 / TRACKER_RATE_HZ + 1.0;
    let after = steady_sequence(&deflected, geom, samples_per_phase, t1, noise)?;
    PerturbationRecord::new(before, after, delta_torque)
}
