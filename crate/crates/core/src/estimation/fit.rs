use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;

use crate::arc::{ArcParams, RobotGeometry};
use crate::error::{Error, Result};

/// Markers closer than this are treated as coincident.
const COINCIDENT_TOL: f64 = 1e-9;
/// Inscribed angles this close to π are read as a straight section.
const COLLINEAR_TOL: f64 = 1e-9;

/// Base, mid-point and tip marker positions, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkerSet {
    pub base: Vector3<f64>,
    pub mid: Vector3<f64>,
    pub tip: Vector3<f64>,
}

impl MarkerSet {
    pub fn new(base: Vector3<f64>, mid: Vector3<f64>, tip: Vector3<f64>) -> Self {
        Self { base, mid, tip }
    }

    pub fn as_array(&self) -> [Vector3<f64>; 3] {
        [self.base, self.mid, self.tip]
    }
}

/// Recovers `(φ, θ)` from the three markers of a constant-curvature section.
///
/// The markers lie on one circle. The inscribed angle at the mid marker
/// subtends the arc from base to tip that does not contain it, so
/// `φ = 2π − 2·∠(base, mid, tip)`. The bending plane contains the base
/// tangent (+Z of the base frame), so `θ` is the azimuth of `tip − base`.
pub fn fit_arc(markers: &MarkerSet, geom: &RobotGeometry) -> Result<ArcParams> {
    let MarkerSet { base, mid, tip } = *markers;
    if [base, mid, tip].iter().any(|p| p.iter().any(|v| !v.is_finite())) {
        return Err(Error::Data("marker positions must be finite".into()));
    }
    let to_base = base - mid;
    let to_tip = tip - mid;
    if to_base.norm() < COINCIDENT_TOL
        || to_tip.norm() < COINCIDENT_TOL
        || (tip - base).norm() < COINCIDENT_TOL
    {
        return Err(Error::Data("coincident markers".into()));
    }

    let inscribed = to_base.cross(&to_tip).norm().atan2(to_base.dot(&to_tip));
    if PI - inscribed <= COLLINEAR_TOL {
        return Ok(ArcParams::straight());
    }
    let phi = (TAU - 2.0 * inscribed).min(geom.phi_max);

    let chord = tip - base;
    let theta = chord.y.atan2(chord.x);
    ArcParams::new(phi, theta)
}
