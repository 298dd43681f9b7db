//! Flat key-value configuration file (TOML syntax).
//!
//! ```toml
//! section_length_m = 0.16
//! actuator_radius_m = 0.02
//! phi_max_rad = 3.141592653589793
//! pma_free_length_m = 0.15
//! pma_max_extension_ratio = 0.5
//! pma_max_pressure_pa = 700000
//! pma_deadzone_pa = 90000
//! palm_radius_m = 0.06
//! object_center_height_m = 0.12
//! irregularity_gain = 0.5
//! friction_coefficient = 1.0
//! ```
//!
//! Every key is optional; missing keys take the library defaults.

use std::path::Path;

use serde::Deserialize;

use crate::arc::RobotGeometry;
use crate::error::{Error, Result};
use crate::gripper::GripperConfig;
use crate::pma::PmaSpec;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    section_length_m: Option<f64>,
    actuator_radius_m: Option<f64>,
    phi_max_rad: Option<f64>,
    pma_free_length_m: Option<f64>,
    pma_max_extension_ratio: Option<f64>,
    pma_max_pressure_pa: Option<f64>,
    pma_deadzone_pa: Option<f64>,
    palm_radius_m: Option<f64>,
    object_center_height_m: Option<f64>,
    irregularity_gain: Option<f64>,
    friction_coefficient: Option<f64>,
}

/// Everything loadable from a configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct HsrConfig {
    pub geometry: RobotGeometry,
    pub pma: PmaSpec,
    pub gripper: GripperConfig,
    pub friction_coefficient: f64,
}

/// Default friction coefficient between silicone fingers and objects.
pub const DEFAULT_FRICTION: f64 = 1.0;

impl Default for HsrConfig {
    fn default() -> Self {
        Self {
            geometry: RobotGeometry::default(),
            pma: PmaSpec::default(),
            gripper: GripperConfig::default(),
            friction_coefficient: DEFAULT_FRICTION,
        }
    }
}

impl HsrConfig {
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, String> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| e.message().to_owned())?;
        let d = HsrConfig::default();
        let geometry = RobotGeometry {
            section_length: raw.section_length_m.unwrap_or(d.geometry.section_length),
            actuator_radius: raw.actuator_radius_m.unwrap_or(d.geometry.actuator_radius),
            phi_max: raw.phi_max_rad.unwrap_or(d.geometry.phi_max),
        };
        let pma = PmaSpec {
            free_length: raw.pma_free_length_m.unwrap_or(d.pma.free_length),
            max_extension_ratio: raw.pma_max_extension_ratio.unwrap_or(d.pma.max_extension_ratio),
            max_pressure: raw.pma_max_pressure_pa.unwrap_or(d.pma.max_pressure),
            deadzone_pressure: raw.pma_deadzone_pa.unwrap_or(d.pma.deadzone_pressure),
        };
        let gripper = GripperConfig {
            finger_geom: geometry,
            palm_radius: raw.palm_radius_m.unwrap_or(d.gripper.palm_radius),
            object_center_height: raw
                .object_center_height_m
                .unwrap_or(d.gripper.object_center_height),
            irregularity_gain: raw.irregularity_gain.unwrap_or(d.gripper.irregularity_gain),
            ..d.gripper
        };
        let cfg = HsrConfig {
            geometry,
            pma,
            gripper,
            friction_coefficient: raw.friction_coefficient.unwrap_or(DEFAULT_FRICTION),
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io_at(path, e))?;
        Self::from_toml_str(&text).map_err(|m| Error::parse(path, m))
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.pma.validate()?;
        self.gripper.validate()?;
        if !(self.friction_coefficient.is_finite() && self.friction_coefficient >= 0.0) {
            return Err(Error::domain(
                "friction_coefficient",
                self.friction_coefficient,
                "[0, inf)",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(HsrConfig::from_toml_str("").unwrap(), HsrConfig::default());
    }

    #[test]
    fn overrides_and_propagates_geometry() {
        let cfg = HsrConfig::from_toml_str("section_length_m = 0.2\nactuator_radius_m = 0.015\n").unwrap();
        assert_eq!(cfg.geometry.section_length, 0.2);
        assert_eq!(cfg.gripper.finger_geom, cfg.geometry);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(HsrConfig::from_toml_str("sectionlength = 1").is_err());
        assert!(HsrConfig::from_toml_str("phi_max_rad = 4.0").is_err());
        assert!(HsrConfig::from_toml_str("pma_deadzone_pa = 800000").is_err());
    }

    #[test]
    fn load_from_disk() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "actuator_radius_m = 0.025").unwrap();
        let cfg = HsrConfig::load(f.path()).unwrap();
        assert_eq!(cfg.geometry.actuator_radius, 0.025);

        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "actuator_radius_m = \"big\"").unwrap();
        assert!(matches!(HsrConfig::load(f.path()), Err(Error::Parse { .. })));
    }
}
