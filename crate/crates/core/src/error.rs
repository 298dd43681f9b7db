use std::path::PathBuf;

/// Errors produced by the kinematic, estimation, map and grasp routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{field} out of {expected} (got {value})")]
    Domain {
        field: &'static str,
        value: f64,
        expected: String,
    },

    /// Joint lengths violate the fixed-length constraint `l1 + l2 + l3 = 0`.
    #[error("fixed-length constraint violated: residual {residual} exceeds tolerance {tolerance:e}")]
    Constraint { residual: f64, tolerance: f64 },

    #[error("pressure {pressure} Pa exceeds the actuator limit of {max} Pa")]
    Overpressure { pressure: f64, max: f64 },

    /// Measured or tabulated data is degenerate or inconsistent.
    #[error("invalid data: {0}")]
    Data(String),

    #[error(
        "perturbation too small to resolve stiffness: |dphi| = {delta_phi:e} rad <= {threshold:e} rad"
    )]
    IndeterminateStiffness { delta_phi: f64, threshold: f64 },

    /// Query falls in an unmeasured region of an empirical map.
    #[error("({p1}, {p2}) bar is outside the measured region of the map")]
    OutOfMap { p1: f64, p2: f64 },

    #[error("stiffness {k} Nm/rad infeasible at phi = {phi} rad: achievable [{k_min}, {k_max}]")]
    InfeasibleStiffness {
        phi: f64,
        k: f64,
        k_min: f64,
        k_max: f64,
    },

    #[error("no finger contacts the object")]
    NoGrasp,

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64, expected: impl Into<String>) -> Self {
        Error::Domain {
            field,
            value,
            expected: expected.into(),
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Wraps an I/O failure with the path it concerns.
    pub(crate) fn io_at(path: &std::path::Path, e: std::io::Error) -> Self {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    }

    /// True for failures caused by the file system rather than by content.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            _ => false,
        }
    }
}
