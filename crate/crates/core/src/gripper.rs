//! Quasi-static model of a three-finger gripper built from HSR sections.
//!
//! Each finger is mounted parallel to the palm axis (+Z) on a circle of
//! radius `palm_radius` and bends in the plane through the axis. An object
//! is centred on the axis at `object_center_height`. For a commanded bend
//! `φ` a finger first touches the object at some smaller bend `φ_touch`;
//! the remaining `φ − φ_touch` is angular interference that the finger's
//! bending stiffness turns into a contact force.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::Vector3;

use crate::arc::{normalize_angle, ArcParams, RobotGeometry};
use crate::error::{Error, Result};
use crate::kinematics::position_unchecked;
use crate::maps::ShapeStiffnessTable;

/// Largest bend increment when scanning for first contact.
const TOUCH_SCAN_STEP: f64 = 0.005;
const TOUCH_BISECTIONS: usize = 50;
/// Faces whose depth is within this of the minimum share the contact normal.
const FACE_TIE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct GripperConfig {
    /// Radius of the finger mount circle.
    pub palm_radius: f64,
    pub finger_geom: RobotGeometry,
    pub mount_angles: [f64; 3],
    /// Fingers bend toward the palm axis when true, away from it otherwise.
    pub fingers_inward: bool,
    /// Height of the object centre above the palm.
    pub object_center_height: f64,
    /// Friction gain per unit of surface irregularity.
    pub irregularity_gain: f64,
    /// Backbone samples per finger used for contact detection.
    pub curve_samples: usize,
}

impl Default for GripperConfig {
    fn default() -> Self {
        Self {
            palm_radius: 0.06,
            finger_geom: RobotGeometry::default(),
            mount_angles: [0.0, TAU / 3.0, 2.0 * TAU / 3.0],
            fingers_inward: true,
            object_center_height: 0.12,
            irregularity_gain: 0.5,
            curve_samples: 161,
        }
    }
}

impl GripperConfig {
    pub fn validate(&self) -> Result<()> {
        self.finger_geom.validate()?;
        if !(self.palm_radius > 0.0 && self.palm_radius.is_finite()) {
            return Err(Error::domain("palm_radius_m", self.palm_radius, "(0, inf)"));
        }
        if !(self.object_center_height > 0.0 && self.object_center_height.is_finite()) {
            return Err(Error::domain("object_center_height_m", self.object_center_height, "(0, inf)"));
        }
        if !(self.irregularity_gain >= 0.0 && self.irregularity_gain.is_finite()) {
            return Err(Error::domain("irregularity_gain", self.irregularity_gain, "[0, inf)"));
        }
        if self.curve_samples < 2 {
            return Err(Error::domain("curve_samples", self.curve_samples as f64, "[2, inf)"));
        }
        let a = self.mount_angles.map(normalize_angle);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let gap = (a[i] - a[j]).abs();
            if gap.min(TAU - gap) < 1e-9 {
                return Err(Error::domain("mount_angles", self.mount_angles[j], "angles distinct modulo 2pi"));
            }
        }
        Ok(())
    }

    fn finger_base(&self, finger: usize) -> Vector3<f64> {
        let (s, c) = self.mount_angles[finger].sin_cos();
        Vector3::new(self.palm_radius * c, self.palm_radius * s, 0.0)
    }

    fn bend_plane(&self, finger: usize) -> f64 {
        let alpha = self.mount_angles[finger];
        normalize_angle(if self.fingers_inward { alpha + PI } else { alpha })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectShape {
    Ball,
    Box,
    Pyramid,
}

impl ObjectShape {
    pub const ALL: [ObjectShape; 3] = [ObjectShape::Ball, ObjectShape::Pyramid, ObjectShape::Box];

    /// Surface irregularity ranking: the sphere is smoothest, the cube the
    /// most faceted.
    pub fn default_irregularity(self) -> f64 {
        match self {
            ObjectShape::Ball => 0.0,
            ObjectShape::Pyramid => 0.5,
            ObjectShape::Box => 1.0,
        }
    }
}

impl fmt::Display for ObjectShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectShape::Ball => "ball",
            ObjectShape::Box => "box",
            ObjectShape::Pyramid => "pyramid",
        })
    }
}

impl FromStr for ObjectShape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ball" => Ok(ObjectShape::Ball),
            "box" => Ok(ObjectShape::Box),
            "pyramid" => Ok(ObjectShape::Pyramid),
            other => Err(format!("unknown object `{other}` (expected ball, box or pyramid)")),
        }
    }
}

pub const DEFAULT_OBJECT_SIZE: f64 = 0.08;
pub const DEFAULT_OBJECT_MASS: f64 = 0.1;

/// A rigid test object centred on the palm axis.
///
/// `characteristic_size` is the ball diameter, the cube side, or the
/// pyramid's base side and height. The pyramid hangs apex down, base face
/// up. `yaw` rotates the object about the palm axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraspObject {
    pub shape: ObjectShape,
    pub characteristic_size: f64,
    pub surface_irregularity: f64,
    pub mass: f64,
    pub yaw: f64,
}

impl GraspObject {
    pub fn new(shape: ObjectShape, characteristic_size: f64) -> Self {
        Self {
            shape,
            characteristic_size,
            surface_irregularity: shape.default_irregularity(),
            mass: DEFAULT_OBJECT_MASS,
            yaw: 0.0,
        }
    }

    pub fn ball(size: f64) -> Self {
        Self::new(ObjectShape::Ball, size)
    }

    pub fn cube(size: f64) -> Self {
        Self::new(ObjectShape::Box, size)
    }

    pub fn pyramid(size: f64) -> Self {
        Self::new(ObjectShape::Pyramid, size)
    }

    pub fn with_yaw(mut self, yaw: f64) -> Self {
        self.yaw = yaw;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.characteristic_size > 0.0 && self.characteristic_size.is_finite()) {
            return Err(Error::domain("characteristic_size", self.characteristic_size, "(0, inf) m"));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::domain("mass", self.mass, "(0, inf) kg"));
        }
        if !(0.0..=1.0).contains(&self.surface_irregularity) {
            return Err(Error::domain("surface_irregularity", self.surface_irregularity, "[0, 1]"));
        }
        if !self.yaw.is_finite() {
            return Err(Error::domain("yaw", self.yaw, "finite rad"));
        }
        Ok(())
    }

    /// Planes `n·v <= offset` bounding a polyhedral envelope, relative to
    /// the object centre.
    fn faces(&self) -> Vec<(Vector3<f64>, f64)> {
        let h = 0.5 * self.characteristic_size;
        let (s, c) = self.yaw.sin_cos();
        let yawed = |n: Vector3<f64>| Vector3::new(c * n.x - s * n.y, s * n.x + c * n.y, n.z);
        let sides = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)];
        match self.shape {
            ObjectShape::Ball => Vec::new(),
            ObjectShape::Box => sides
                .iter()
                .map(|&(x, y)| (yawed(Vector3::new(x, y, 0.0)), h))
                .chain([(Vector3::z(), h), (-Vector3::z(), h)])
                .collect(),
            ObjectShape::Pyramid => {
                // apex at -h, base square of half-width h at +h
                let slant = 5.0_f64.sqrt();
                sides
                    .iter()
                    .map(|&(x, y)| (yawed(Vector3::new(2.0 * x, 2.0 * y, -1.0) / slant), h / slant))
                    .chain([(Vector3::z(), h)])
                    .collect()
            }
        }
    }
}

/// Signed depth of `v` (relative to the object centre) inside the object,
/// positive inside.
fn depth(object: &GraspObject, faces: &[(Vector3<f64>, f64)], v: &Vector3<f64>) -> f64 {
    if object.shape == ObjectShape::Ball {
        return 0.5 * object.characteristic_size - v.norm();
    }
    faces.iter().map(|(n, off)| off - n.dot(v)).fold(f64::INFINITY, f64::min)
}

/// Unit surface normal nearest to `v`, pointing into the object.
fn inward_normal(object: &GraspObject, faces: &[(Vector3<f64>, f64)], v: &Vector3<f64>) -> Vector3<f64> {
    if object.shape == ObjectShape::Ball {
        let r = v.norm();
        return if r > 0.0 { -v / r } else { -Vector3::z() };
    }
    let min = depth(object, faces, v);
    // averaging tied faces gives edges and corners a bisecting normal
    let outward: Vector3<f64> = faces
        .iter()
        .filter(|(n, off)| off - n.dot(v) <= min + FACE_TIE_TOL)
        .map(|(n, _)| *n)
        .sum();
    -outward.normalize()
}

/// Where and how a finger meets the object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    /// Contact point in the palm frame.
    pub point: Vector3<f64>,
    /// Unit normal pointing into the object.
    pub normal: Vector3<f64>,
    /// Arc fraction of the contact along the finger.
    pub xi: f64,
    /// Bend at which the finger first touches.
    pub touch_phi: f64,
    /// Angular interference `φ − φ_touch`.
    pub deflection: f64,
}

/// The gripper closed on an object.
#[derive(Debug, Clone, PartialEq)]
pub struct GraspState {
    pub finger_arc: [ArcParams; 3],
    pub finger_stiffness: [f64; 3],
    pub contacts: [Option<Contact>; 3],
    pub section_length: f64,
    pub irregularity_gain: f64,
}

impl GraspState {
    pub fn contact_count(&self) -> usize {
        self.contacts.iter().flatten().count()
    }
}

struct Finger<'a> {
    config: &'a GripperConfig,
    object: &'a GraspObject,
    faces: Vec<(Vector3<f64>, f64)>,
    base: Vector3<f64>,
    theta: f64,
}

impl Finger<'_> {
    fn centre(&self) -> Vector3<f64> {
        Vector3::new(0.0, 0.0, self.config.object_center_height)
    }

    /// Backbone samples at bend `phi` as `(xi, depth, point)`; the same
    /// samples as `backbone_curve`, positions only.
    fn samples(&self, phi: f64) -> impl Iterator<Item = (f64, f64, Vector3<f64>)> + '_ {
        let centre = self.centre();
        let length = self.config.finger_geom.section_length;
        let last = (self.config.curve_samples - 1) as f64;
        (0..self.config.curve_samples).map(move |i| {
            let xi = i as f64 / last;
            let point = self.base + position_unchecked(phi, self.theta, xi, length);
            (xi, depth(self.object, &self.faces, &(point - centre)), point)
        })
    }

    /// Deepest sample at bend `phi`: `(xi, point, inward normal)`.
    fn deepest(&self, phi: f64) -> (f64, Vector3<f64>, Vector3<f64>) {
        let (xi, _, point) = self
            .samples(phi)
            .fold((0.0, f64::NEG_INFINITY, Vector3::zeros()), |best, s| if s.1 > best.1 { s } else { best });
        (xi, point, inward_normal(self.object, &self.faces, &(point - self.centre())))
    }

    fn touches(&self, phi: f64) -> bool {
        self.samples(phi).any(|s| s.1 > 0.0)
    }

    /// First bend in `[0, phi]` at which the finger touches the object.
    fn first_touch(&self, phi: f64) -> Option<f64> {
        let steps = ((phi / TOUCH_SCAN_STEP).ceil() as usize).max(1);
        let mut lo = 0.0;
        for i in 0..=steps {
            let p = phi * i as f64 / steps as f64;
            if self.touches(p) {
                if i == 0 {
                    return Some(0.0);
                }
                let mut hi = p;
                for _ in 0..TOUCH_BISECTIONS {
                    let mid = 0.5 * (lo + hi);
                    if self.touches(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Some(hi);
            }
            lo = p;
        }
        None
    }
}

/// Closes all three fingers to bend `phi` with stiffness `k` (Nm/rad).
pub fn close_grasp(config: &GripperConfig, object: &GraspObject, phi: f64, k: f64) -> Result<GraspState> {
    config.validate()?;
    object.validate()?;
    config.finger_geom.check_phi(phi)?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::domain("k", k, "(0, inf) Nm/rad"));
    }
    let faces = object.faces();
    let mut arcs = [ArcParams::straight(); 3];
    let mut contacts = [None; 3];
    for f in 0..3 {
        let finger = Finger {
            config,
            object,
            faces: faces.clone(),
            base: config.finger_base(f),
            theta: config.bend_plane(f),
        };
        arcs[f] = ArcParams::new(phi, finger.theta)?;
        if let Some(touch_phi) = finger.first_touch(phi) {
            let (xi, point, normal) = finger.deepest(touch_phi);
            contacts[f] = Some(Contact {
                point,
                normal,
                xi,
                touch_phi,
                deflection: phi - touch_phi,
            });
        }
    }
    if contacts.iter().all(Option::is_none) {
        return Err(Error::NoGrasp);
    }
    Ok(GraspState {
        finger_arc: arcs,
        finger_stiffness: [k; 3],
        contacts,
        section_length: config.finger_geom.section_length,
        irregularity_gain: config.irregularity_gain,
    })
}

/// Split of the pull-out force into its friction-borne and
/// normal-force-borne parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailureForce {
    pub friction: f64,
    pub axial: f64,
}

impl FailureForce {
    pub fn total(&self) -> f64 {
        self.friction + self.axial
    }
}

/// Per-contact normal force `k·Δφ / (ξL)`.
fn normal_force(state: &GraspState, finger: usize, c: &Contact) -> f64 {
    let min_arm = state.section_length * 1e-3;
    let arm = (c.xi * state.section_length).max(min_arm);
    state.finger_stiffness[finger] * c.deflection / arm
}

pub fn failure_force_components(state: &GraspState, object: &GraspObject, mu: f64) -> Result<FailureForce> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::domain("mu", mu, "[0, inf)"));
    }
    if state.contact_count() == 0 {
        return Err(Error::NoGrasp);
    }
    let grip = mu * (1.0 + state.irregularity_gain * object.surface_irregularity);
    let mut out = FailureForce {
        friction: 0.0,
        axial: 0.0,
    };
    for (f, c) in state.contacts.iter().enumerate() {
        let Some(c) = c else { continue };
        let n = normal_force(state, f, c);
        out.friction += grip * n;
        // the pull acts along +Z; an inward normal with a -Z part resists it
        out.axial += n * (-c.normal.z).max(0.0);
    }
    Ok(out)
}

/// Pull-out force in newtons along the palm axis at which the grip fails.
pub fn failure_force(state: &GraspState, object: &GraspObject, mu: f64) -> Result<f64> {
    failure_force_components(state, object, mu).map(|f| f.total())
}

/// One cell of the grip study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub object: ObjectShape,
    pub phi: f64,
    pub k: f64,
    pub p1: f64,
    pub p2: f64,
    /// `None` when the fingers do not reach the object.
    pub failure_force: Option<f64>,
}

/// Failure force for every object at every operating point of `table`,
/// ordered by object, then by table row.
pub fn sweep_grip_study(
    config: &GripperConfig,
    objects: &[GraspObject],
    table: &ShapeStiffnessTable,
    mu: f64,
) -> Result<Vec<StudyRow>> {
    let mut rows = Vec::with_capacity(objects.len() * table.rows().len());
    for object in objects {
        for r in table.rows() {
            let force = match close_grasp(config, object, r.phi, r.k) {
                Ok(state) => Some(failure_force(&state, object, mu)?),
                Err(Error::NoGrasp) => None,
                Err(e) => return Err(e),
            };
            rows.push(StudyRow {
                object: object.shape,
                phi: r.phi,
                k: r.k,
                p1: r.p1,
                p2: r.p2,
                failure_force: force,
            });
        }
    }
    Ok(rows)
}

pub const STUDY_HEADER: &str = "object,phi_rad,k_nm_per_rad,p1_bar,p2_bar,failure_force_n";

/// Study CSV; an unreachable cell has an empty force field.
pub fn write_study_csv<W: Write>(rows: &[StudyRow], mut out: W) -> Result<()> {
    writeln!(out, "{STUDY_HEADER}")?;
    for r in rows {
        let force = r.failure_force.map(|f| format!("{f:.9}")).unwrap_or_default();
        writeln!(out, "{},{},{},{},{},{}", r.object, r.phi, r.k, r.p1, r.p2, force)?;
    }
    Ok(())
}
