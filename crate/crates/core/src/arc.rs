//! Arc (configuration-space) and joint-space parameterizations of a single
//! fixed-length section, and the closed-form maps between them.
//!
//! Actuator `i` (1-based) sits at radius `r` and angle `2π/3·(i−1)` from +X.
//! Because the backbone is inextensible the three length changes always sum
//! to zero, which leaves a one-to-one map between `(l1, l2, l3)` and `(φ, θ)`.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default actuator pitch radius in meters.
///
/// The prototype's pitch radius is not published; 2 cm is a placeholder
/// consistent with a 16 cm dress-pack backbone.
pub const DEFAULT_ACTUATOR_RADIUS: f64 = 0.02;

/// Backbone length of the prototype section in meters.
pub const DEFAULT_SECTION_LENGTH: f64 = 0.16;

/// Relative tolerance used when accepting externally supplied joint states.
pub const JOINT_CONSTRAINT_RTOL: f64 = 1e-9;

/// Geometry of one section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotGeometry {
    /// Backbone (neutral axis) length `L`.
    #[serde(rename = "section_length_m")]
    pub section_length: f64,
    /// Radial offset `r` of each actuator from the neutral axis.
    #[serde(rename = "actuator_radius_m")]
    pub actuator_radius: f64,
    /// Largest admissible bend angle.
    #[serde(rename = "phi_max_rad")]
    pub phi_max: f64,
}

impl Default for RobotGeometry {
    fn default() -> Self {
        Self {
            section_length: DEFAULT_SECTION_LENGTH,
            actuator_radius: DEFAULT_ACTUATOR_RADIUS,
            phi_max: PI,
        }
    }
}

impl RobotGeometry {
    pub fn new(section_length: f64, actuator_radius: f64, phi_max: f64) -> Result<Self> {
        let geom = Self {
            section_length,
            actuator_radius,
            phi_max,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.section_length > 0.0 && self.section_length.is_finite()) {
            return Err(Error::domain("section_length_m", self.section_length, "(0, inf)"));
        }
        if !(self.actuator_radius > 0.0 && self.actuator_radius < self.section_length) {
            return Err(Error::domain(
                "actuator_radius_m",
                self.actuator_radius,
                format!("(0, {})", self.section_length),
            ));
        }
        if !(self.phi_max > 0.0 && self.phi_max <= PI) {
            return Err(Error::domain("phi_max_rad", self.phi_max, "(0, pi]"));
        }
        Ok(())
    }

    /// Largest length change any single actuator can see.
    pub fn max_length_change(&self) -> f64 {
        self.actuator_radius * self.phi_max
    }

    pub(crate) fn phi_range_label(&self) -> String {
        if self.phi_max == PI {
            "[0, pi]".to_owned()
        } else {
            format!("[0, {}]", self.phi_max)
        }
    }

    pub(crate) fn check_phi(&self, phi: f64) -> Result<()> {
        if phi.is_finite() && (0.0..=self.phi_max).contains(&phi) {
            Ok(())
        } else {
            Err(Error::domain("phi", phi, self.phi_range_label()))
        }
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly 2π
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Shortest signed distance between two angles, in `(-π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Configuration-space pose of one section: bend angle and bending plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcParams {
    phi: f64,
    theta: f64,
}

impl ArcParams {
    /// Builds arc parameters, normalizing `theta` into `[0, 2π)`.
    ///
    /// The upper bound on `phi` depends on the geometry and is checked by the
    /// operations that take one.
    pub fn new(phi: f64, theta: f64) -> Result<Self> {
        if !(phi.is_finite() && phi >= 0.0) {
            return Err(Error::domain("phi", phi, "[0, pi]"));
        }
        if !theta.is_finite() {
            return Err(Error::domain("theta", theta, "finite angle"));
        }
        Ok(Self {
            phi,
            theta: normalize_angle(theta),
        })
    }

    pub fn straight() -> Self {
        Self { phi: 0.0, theta: 0.0 }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Actuator length changes `(l1, l2, l3)` in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointState {
    pub l: [f64; 3],
}

impl JointState {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Self {
        Self { l: [l1, l2, l3] }
    }

    /// Sum of the three length changes.
    pub fn residual(&self) -> f64 {
        self.l.iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.l.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Absolute tolerance on the residual for this state.
    pub fn tolerance(&self) -> f64 {
        JOINT_CONSTRAINT_RTOL * self.max_abs().max(1.0)
    }
}

/// Result of checking the fixed-length constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintCheck {
    pub satisfied: bool,
    pub residual: f64,
}

/// Checks `l1 + l2 + l3 = 0` against the acceptance tolerance
/// `1e-9 · max(1, |l|∞)`.
pub fn validate_joint_constraint(joints: &JointState) -> ConstraintCheck {
    let residual = joints.residual();
    ConstraintCheck {
        satisfied: residual.is_finite() && residual.abs() <= joints.tolerance(),
        residual,
    }
}

/// Actuator length changes that produce the given arc:
/// `l_i = −r·φ·cos(2π/3·(i−1) − θ)`.
pub fn joints_from_arc(arc: &ArcParams, geom: &RobotGeometry) -> Result<JointState> {
    geom.check_phi(arc.phi)?;
    let scale = -geom.actuator_radius * arc.phi;
    let mut l = [0.0; 3];
    for (i, li) in l.iter_mut().enumerate() {
        *li = scale * (2.0 * FRAC_PI_3 * i as f64 - arc.theta).cos();
    }
    Ok(JointState { l })
}

/// Arc parameters realized by the given actuator length changes.
///
/// The straight pose has no defined bending plane; `θ = 0` is returned there.
pub fn arc_from_joints(joints: &JointState, geom: &RobotGeometry) -> Result<ArcParams> {
    if joints.l.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("joint lengths must be finite".into()));
    }
    let check = validate_joint_constraint(joints);
    if !check.satisfied {
        return Err(Error::Constraint {
            residual: check.residual,
            tolerance: joints.tolerance(),
        });
    }
    let [l1, l2, l3] = joints.l;
    // sum_i (l_i^2 - l_i l_{i+1}) written as half the sum of squared
    // differences, which cannot go negative through cancellation
    let quad = 0.5 * ((l1 - l2).powi(2) + (l2 - l3).powi(2) + (l3 - l1).powi(2));
    let phi = 2.0 * quad.sqrt() / (3.0 * geom.actuator_radius);
    if phi > geom.phi_max * (1.0 + 1e-12) {
        return Err(Error::domain("phi", phi, geom.phi_range_label()));
    }
    let phi = phi.min(geom.phi_max);
    let theta = if phi == 0.0 {
        0.0
    } else {
        (3f64.sqrt() * (l3 - l2)).atan2(l2 + l3 - 2.0 * l1)
    };
    ArcParams::new(phi, theta)
}

/// Planar-bending joint state `(−b, b/2, b/2)`, the configuration produced by
/// driving actuators 2 and 3 with the same command. Positive `bend` bends
/// toward θ = 0, negative toward θ = π.
pub fn planar_joints(bend: f64, geom: &RobotGeometry) -> Result<JointState> {
    let limit = geom.max_length_change();
    if !(bend.is_finite() && bend.abs() <= limit) {
        return Err(Error::domain("bend", bend, format!("[-{limit}, {limit}]")));
    }
    let half = 0.5 * bend;
    Ok(JointState::new(-bend, half, half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn geom() -> RobotGeometry {
        RobotGeometry::default()
    }

    /// Scalar substitution into the joint map, kept apart from the
    /// implementation's loop.
    fn joints_oracle(phi: f64, theta: f64, r: f64) -> [f64; 3] {
        [
            -r * phi * (0.0 - theta).cos(),
            -r * phi * (2.0 * PI / 3.0 - theta).cos(),
            -r * phi * (4.0 * PI / 3.0 - theta).cos(),
        ]
    }

    #[test]
    fn straight_section_has_no_length_change() {
        for theta in [0.0, 1.0, 4.0] {
            let j = joints_from_arc(&ArcParams::new(0.0, theta).unwrap(), &geom()).unwrap();
            assert_eq!(j.l.map(f64::abs), [0.0; 3]);
        }
    }

    #[test]
    fn quarter_bend_in_x_plane() {
        let j = joints_from_arc(&ArcParams::new(FRAC_PI_2, 0.0).unwrap(), &geom()).unwrap();
        let expected = joints_oracle(FRAC_PI_2, 0.0, 0.02);
        for i in 0..3 {
            assert_abs_diff_eq!(j.l[i], expected[i], epsilon = 1e-15);
        }
        assert_abs_diff_eq!(j.l[0], -0.031_415_926_535_897_93, epsilon = 1e-15);
        assert_abs_diff_eq!(j.l[1], 0.015_707_963_267_948_97, epsilon = 1e-15);
        assert_abs_diff_eq!(j.l[2], 0.015_707_963_267_948_97, epsilon = 1e-15);
    }

    #[test]
    fn bend_toward_second_actuator() {
        let j = joints_from_arc(&ArcParams::new(1.0, 2.0 * PI / 3.0).unwrap(), &geom()).unwrap();
        assert_abs_diff_eq!(j.l[0], 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(j.l[1], -0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(j.l[2], 0.01, epsilon = 1e-15);
    }

    #[test]
    fn joints_reject_out_of_range_phi() {
        let err = joints_from_arc(&ArcParams::new(4.0, 0.0).unwrap(), &geom()).unwrap_err();
        assert_eq!(err.to_string(), "phi out of [0, pi] (got 4)");
        assert!(ArcParams::new(-0.1, 0.0).is_err());
        assert!(matches!(
            ArcParams::new(0.1, f64::NAN),
            Err(Error::Domain { field: "theta", .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        let a = arc_from_joints(&JointState::new(0.0, 0.0, 0.0), &geom()).unwrap();
        assert_eq!((a.phi(), a.theta()), (0.0, 0.0));

        let a = arc_from_joints(&JointState::new(-0.031416, 0.015708, 0.015708), &geom()).unwrap();
        assert_abs_diff_eq!(a.phi(), FRAC_PI_2, epsilon = 1e-4);
        assert_abs_diff_eq!(angle_difference(a.theta(), 0.0), 0.0, epsilon = 1e-12);

        let a = arc_from_joints(&JointState::new(0.01, -0.02, 0.01), &geom()).unwrap();
        assert_abs_diff_eq!(a.phi(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.theta(), 2.0 * PI / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn quadratic_form_matches_closed_form() {
        // sum (l_i^2 - l_i l_{i+1}) = 9/4 r^2 phi^2 on the constraint surface
        let (phi, theta, r) = (0.7, 2.3, 0.02);
        let l = joints_oracle(phi, theta, r);
        let direct: f64 = (0..3).map(|i| l[i] * l[i] - l[i] * l[(i + 1) % 3]).sum();
        assert_abs_diff_eq!(direct, 2.25 * r * r * phi * phi, epsilon = 1e-18);
    }

    #[test]
    fn constraint_predicate() {
        let c = validate_joint_constraint(&JointState::new(0.0, 0.0, 0.0));
        assert!(c.satisfied);
        assert_eq!(c.residual, 0.0);

        let c = validate_joint_constraint(&JointState::new(0.01, -0.02, 0.01));
        assert!(c.satisfied);
        assert_eq!(c.residual, 0.0);

        let c = validate_joint_constraint(&JointState::new(0.01, 0.01, 0.01));
        assert!(!c.satisfied);
        assert_abs_diff_eq!(c.residual, 0.03, epsilon = 1e-15);

        assert!(matches!(
            arc_from_joints(&JointState::new(0.01, 0.01, 0.01), &geom()),
            Err(Error::Constraint { .. })
        ));
    }

    #[test]
    fn joints_beyond_phi_max_rejected() {
        let g = RobotGeometry::new(0.16, 0.02, 1.0).unwrap();
        let j = JointState::new(-0.04, 0.02, 0.02); // phi = 2
        assert!(matches!(arc_from_joints(&j, &g), Err(Error::Domain { field: "phi", .. })));
    }

    #[test]
    fn planar_examples() {
        assert_eq!(planar_joints(0.0, &geom()).unwrap().l.map(f64::abs), [0.0; 3]);
        assert_eq!(planar_joints(0.0314, &geom()).unwrap().l, [-0.0314, 0.0157, 0.0157]);
        assert_eq!(planar_joints(-0.02, &geom()).unwrap().l, [0.02, -0.01, -0.01]);
        assert!(planar_joints(0.07, &geom()).is_err());

        let a = arc_from_joints(&planar_joints(-0.02, &geom()).unwrap(), &geom()).unwrap();
        assert_abs_diff_eq!(a.theta(), PI, epsilon = 1e-12);
    }

    #[test]
    fn geometry_validation() {
        assert!(RobotGeometry::new(0.16, 0.02, PI).is_ok());
        assert!(RobotGeometry::new(0.0, 0.02, PI).is_err());
        assert!(RobotGeometry::new(0.16, 0.2, PI).is_err());
        assert!(RobotGeometry::new(0.16, 0.02, 3.5).is_err());
    }

    #[test]
    fn angle_helpers() {
        assert_eq!(normalize_angle(-1e-300), 0.0);
        assert_abs_diff_eq!(normalize_angle(-FRAC_PI_2), 1.5 * PI);
        assert_abs_diff_eq!(angle_difference(0.01, TAU - 0.01), 0.02, epsilon = 1e-15);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip(phi in 1e-6..PI, theta in 0.0..TAU) {
                let g = geom();
                let arc = ArcParams::new(phi, theta).unwrap();
                let back = arc_from_joints(&joints_from_arc(&arc, &g).unwrap(), &g).unwrap();
                prop_assert!((back.phi() - phi).abs() <= 1e-9);
                prop_assert!(angle_difference(back.theta(), arc.theta()).abs() <= 1e-9);
            }

            #[test]
            fn constraint_closure(phi in 0.0..PI, theta in 0.0..TAU) {
                let g = geom();
                let j = joints_from_arc(&ArcParams::new(phi, theta).unwrap(), &g).unwrap();
                let ulp = f64::EPSILON * g.actuator_radius * phi;
                prop_assert!(j.residual().abs() <= 4.0 * ulp);
            }

            #[test]
            fn antisymmetry(phi in 0.0..PI, theta in 0.0..TAU) {
                let g = geom();
                let a = joints_from_arc(&ArcParams::new(phi, theta).unwrap(), &g).unwrap();
                let b = joints_from_arc(&ArcParams::new(phi, theta + PI).unwrap(), &g).unwrap();
                for i in 0..3 {
                    prop_assert!((a.l[i] + b.l[i]).abs() <= 1e-12);
                }
            }

            #[test]
            fn rotation_permutes_actuators(phi in 0.0..PI, theta in 0.0..TAU) {
                let g = geom();
                let a = joints_from_arc(&ArcParams::new(phi, theta).unwrap(), &g).unwrap();
                let b = joints_from_arc(&ArcParams::new(phi, theta + 2.0 * PI / 3.0).unwrap(), &g)
                    .unwrap();
                prop_assert!((b.l[0] - a.l[2]).abs() <= 1e-12);
                prop_assert!((b.l[1] - a.l[0]).abs() <= 1e-12);
                prop_assert!((b.l[2] - a.l[1]).abs() <= 1e-12);
            }
        }
    }
}
