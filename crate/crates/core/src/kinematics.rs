//! Forward kinematics of a constant-curvature section.
//!
//! The frame at arc fraction `ξ` is
//! `T = R_Z(θ) · P_X(L/φ) · R_Y(ξφ) · P_X(−L/φ) · R_Z(−θ)`,
//! i.e. the bend angle is scaled by `ξ` while the curvature radius `L/φ`
//! stays fixed. Poses are expressed in the section's base frame.

use std::f64::consts::TAU;
use std::io::Write;

use nalgebra::{Matrix3, Rotation3, Vector3};

use crate::arc::{ArcParams, RobotGeometry};
use crate::error::{Error, Result};

/// Below this bend angle the `L/φ` terms are replaced by their series.
pub const STRAIGHT_THRESHOLD: f64 = 1e-7;

/// Rigid transform of a backbone frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub rotation: Matrix3<f64>,
    pub position: Vector3<f64>,
}

impl Pose {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            position: Vector3::zeros(),
        }
    }

    /// `‖RᵀR − I‖∞` and `|det R − 1|` both within `tol`.
    pub fn is_orthonormal(&self, tol: f64) -> bool {
        let gram = self.rotation.transpose() * self.rotation - Matrix3::identity();
        gram.amax() <= tol && (self.rotation.determinant() - 1.0).abs() <= tol
    }
}

/// A frame on the neutral axis at arc fraction `xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackbonePoint {
    pub xi: f64,
    pub pose: Pose,
}

fn rot_z(angle: f64) -> Matrix3<f64> {
    *Rotation3::from_axis_angle(&Vector3::z_axis(), angle).matrix()
}

fn rot_y(angle: f64) -> Matrix3<f64> {
    *Rotation3::from_axis_angle(&Vector3::y_axis(), angle).matrix()
}

/// In-plane offsets `(ρ(1 − cos ξφ), ρ sin ξφ)` with `ρ = L/φ`.
fn planar_offsets(phi: f64, xi: f64, length: f64) -> (f64, f64) {
    if phi < STRAIGHT_THRESHOLD {
        let a = xi * phi;
        (0.5 * length * xi * a, length * xi)
    } else {
        let rho = length / phi;
        let a = xi * phi;
        // 1 - cos a = 2 sin^2(a/2), no cancellation for small a
        (2.0 * rho * (0.5 * a).sin().powi(2), rho * a.sin())
    }
}

/// Pose of the neutral-axis frame at arc fraction `xi ∈ [0, 1]`.
pub fn pose_at(arc: &ArcParams, xi: f64, geom: &RobotGeometry) -> Result<Pose> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::domain("xi", xi, "[0, 1]"));
    }
    geom.check_phi(arc.phi())?;
    Ok(pose_unchecked(arc.phi(), arc.theta(), xi, geom.section_length))
}

pub(crate) fn pose_unchecked(phi: f64, theta: f64, xi: f64, length: f64) -> Pose {
    let (radial, axial) = planar_offsets(phi, xi, length);
    let (s, c) = theta.sin_cos();
    let rotation = rot_z(theta) * rot_y(xi * phi) * rot_z(-theta);
    Pose {
        rotation,
        position: Vector3::new(radial * c, radial * s, axial),
    }
}

/// Position part of [`pose_unchecked`], for hot loops that need no frame.
pub(crate) fn position_unchecked(phi: f64, theta: f64, xi: f64, length: f64) -> Vector3<f64> {
    let (radial, axial) = planar_offsets(phi, xi, length);
    let (s, c) = theta.sin_cos();
    Vector3::new(radial * c, radial * s, axial)
}

/// `n` frames at uniformly spaced arc fractions from base to tip.
pub fn backbone_curve(arc: &ArcParams, n: usize, geom: &RobotGeometry) -> Result<Vec<BackbonePoint>> {
    if n < 2 {
        return Err(Error::domain("n", n as f64, "[2, inf)"));
    }
    geom.check_phi(arc.phi())?;
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let xi = i as f64 / last;
            BackbonePoint {
                xi,
                pose: pose_unchecked(arc.phi(), arc.theta(), xi, geom.section_length),
            }
        })
        .collect())
}

/// One tip position of a workspace sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkspaceSample {
    pub phi: f64,
    pub theta: f64,
    pub position: Vector3<f64>,
}

/// Tip positions over a `(φ, θ)` grid, row-major in φ then θ.
///
/// φ spans `[0, phi_max]` inclusive (a single row sits at φ = 0); θ spans
/// `[0, 2π)` in `n_theta` equal steps.
pub fn sample_workspace(geom: &RobotGeometry, n_phi: usize, n_theta: usize) -> Vec<WorkspaceSample> {
    let mut out = Vec::with_capacity(n_phi * n_theta);
    for i in 0..n_phi {
        let phi = if n_phi == 1 {
            0.0
        } else {
            geom.phi_max * i as f64 / (n_phi - 1) as f64
        };
        for j in 0..n_theta {
            let theta = TAU * j as f64 / n_theta as f64;
            let pose = pose_unchecked(phi, theta, 1.0, geom.section_length);
            out.push(WorkspaceSample {
                phi,
                theta,
                position: pose.position,
            });
        }
    }
    out
}

/// Writes workspace samples as `phi,theta,x,y,z`.
pub fn write_workspace_csv<W: Write>(samples: &[WorkspaceSample], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["phi", "theta", "x", "y", "z"])?;
    for s in samples {
        wtr.write_record(&[
            fmt_num(s.phi),
            fmt_num(s.theta),
            fmt_num(s.position.x),
            fmt_num(s.position.y),
            fmt_num(s.position.z),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub(crate) fn fmt_num(v: f64) -> String {
    // fold -0 into 0 so mirrored samples print identically
    format!("{:.12e}", v + 0.0)
}
