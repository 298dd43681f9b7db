use crate::arc::RobotGeometry;
use crate::error::{Error, Result};

use super::{fit_arc, TrackerSequence};

/// Smallest bend change treated as a measurable deflection, in radians.
pub const MIN_DELTA_PHI: f64 = 1e-4;

/// A static torque perturbation test: steady-state tracking before and
/// after applying `delta_torque` normal to the neutral axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationRecord {
    pub baseline: TrackerSequence,
    pub perturbed: TrackerSequence,
    /// Applied torque step in Nm.
    pub delta_torque: f64,
}

impl PerturbationRecord {
    pub fn new(baseline: TrackerSequence, perturbed: TrackerSequence, delta_torque: f64) -> Result<Self> {
        if !(delta_torque.is_finite() && delta_torque > 0.0) {
            return Err(Error::domain("delta_torque", delta_torque, "(0, inf) Nm"));
        }
        Ok(Self {
            baseline,
            perturbed,
            delta_torque,
        })
    }
}

/// Bending stiffness `K = Δτ / Δφ` in Nm/rad.
///
/// Each sequence is time-averaged per marker before fitting its arc.
pub fn estimate_stiffness(record: &PerturbationRecord, geom: &RobotGeometry) -> Result<f64> {
    let before = fit_arc(&record.baseline.mean_markers(), geom)?;
    let after = fit_arc(&record.perturbed.mean_markers(), geom)?;
    let delta_phi = (after.phi() - before.phi()).abs();
    if delta_phi <= MIN_DELTA_PHI {
        return Err(Error::IndeterminateStiffness {
            delta_phi,
            threshold: MIN_DELTA_PHI,
        });
    }
    Ok(record.delta_torque / delta_phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::ArcParams;
    use crate::estimation::synthetic::steady_sequence;

    fn record(phi0: f64, phi1: f64, torque: f64) -> PerturbationRecord {
        let g = RobotGeometry::default();
        let a = steady_sequence(&ArcParams::new(phi0, 0.0).unwrap(), &g, 50, 0.0, &mut || nalgebra::Vector3::zeros()).unwrap();
        let b = steady_sequence(&ArcParams::new(phi1, 0.0).unwrap(), &g, 50, 1.0, &mut || nalgebra::Vector3::zeros()).unwrap();
        PerturbationRecord::new(a, b, torque).unwrap()
    }

    #[test]
    fn backboneless_natural_stiffness() {
        // 0.1 Nm moving phi from 0.50 to 0.756 rad
        let k = estimate_stiffness(&record(0.50, 0.756, 0.1), &RobotGeometry::default()).unwrap();
        assert!((k - 0.39).abs() < 0.005, "{k}");
    }

    #[test]
    fn ratio_arithmetic() {
        let k = estimate_stiffness(&record(0.8, 0.9, 0.1), &RobotGeometry::default()).unwrap();
        assert!((k - 1.0).abs() < 1e-9);
    }

    #[test]
    fn doubling_torque_keeps_stiffness() {
        let k_true = 0.7;
        let g = RobotGeometry::default();
        let k1 = estimate_stiffness(&record(0.6, 0.6 + 0.1 / k_true, 0.1), &g).unwrap();
        let k2 = estimate_stiffness(&record(0.6, 0.6 + 0.2 / k_true, 0.2), &g).unwrap();
        assert!((k1 - k2).abs() <= 0.01 * k1);
    }

    #[test]
    fn unresolvable_perturbation() {
        let err = estimate_stiffness(&record(0.6, 0.6, 0.1), &RobotGeometry::default()).unwrap_err();
        assert!(matches!(err, Error::IndeterminateStiffness { .. }));
    }

    #[test]
    fn torque_must_be_positive() {
        let r = record(0.6, 0.7, 0.1);
        assert!(PerturbationRecord::new(r.baseline.clone(), r.perturbed.clone(), 0.0).is_err());
    }
}
