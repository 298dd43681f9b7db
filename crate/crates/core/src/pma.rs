//! Supply pressure to free extension of an extending-mode pneumatic muscle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bar to pascal.
pub const PA_PER_BAR: f64 = 1e5;

/// Static characterization of one actuator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmaSpec {
    #[serde(rename = "pma_free_length_m")]
    pub free_length: f64,
    /// Extension at maximum pressure as a fraction of the free length.
    #[serde(rename = "pma_max_extension_ratio")]
    pub max_extension_ratio: f64,
    #[serde(rename = "pma_max_pressure_pa")]
    pub max_pressure: f64,
    /// Pressure needed to overcome the initial radial expansion.
    #[serde(rename = "pma_deadzone_pa")]
    pub deadzone_pressure: f64,
}

impl Default for PmaSpec {
    /// 150 mm muscle, 50 % extension, 700 kPa rating, 90 kPa deadzone.
    fn default() -> Self {
        Self {
            free_length: 0.150,
            max_extension_ratio: 0.5,
            max_pressure: 700e3,
            deadzone_pressure: 90e3,
        }
    }
}

impl PmaSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.free_length > 0.0 && self.free_length.is_finite()) {
            return Err(Error::domain("pma_free_length_m", self.free_length, "(0, inf)"));
        }
        if !(self.max_extension_ratio > 0.0 && self.max_extension_ratio <= 0.5) {
            return Err(Error::domain(
                "pma_max_extension_ratio",
                self.max_extension_ratio,
                "(0, 0.5]",
            ));
        }
        if !(self.max_pressure.is_finite() && self.deadzone_pressure > 0.0) {
            return Err(Error::domain("pma_deadzone_pa", self.deadzone_pressure, "(0, max_pressure)"));
        }
        if self.deadzone_pressure >= self.max_pressure {
            return Err(Error::domain(
                "pma_deadzone_pa",
                self.deadzone_pressure,
                format!("(0, {})", self.max_pressure),
            ));
        }
        Ok(())
    }

    pub fn max_extension(&self) -> f64 {
        self.free_length * self.max_extension_ratio
    }
}

/// Unconstrained extension at the given supply pressure.
///
/// Zero up to and including the deadzone, then linear up to the maximum
/// extension at the rated pressure.
pub fn free_extension(pressure: f64, spec: &PmaSpec) -> Result<f64> {
    if !(pressure.is_finite() && pressure >= 0.0) {
        return Err(Error::domain("pressure", pressure, format!("[0, {}] Pa", spec.max_pressure)));
    }
    if pressure > spec.max_pressure {
        return Err(Error::Overpressure {
            pressure,
            max: spec.max_pressure,
        });
    }
    if pressure <= spec.deadzone_pressure {
        return Ok(0.0);
    }
    let frac = (pressure - spec.deadzone_pressure) / (spec.max_pressure - spec.deadzone_pressure);
    Ok(spec.max_extension() * frac)
}

/// [`free_extension`] with the pressure given in bar.
pub fn free_extension_bar(pressure_bar: f64, spec: &PmaSpec) -> Result<f64> {
    free_extension(pressure_bar * PA_PER_BAR, spec)
}
