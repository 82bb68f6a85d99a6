use core::fmt;

/// Failures of the pure algebra layer.
#[derive(Clone, Debug, PartialEq)]
pub enum CoreError {
    /// Inversion or normalisation of the zero quaternion.
    ZeroQuaternion,
    /// A quaternion handed to `UnitQuaternion::new` was not of unit length.
    NotUnit(f64),
    /// Dilation parameter ρ ≤ 0.
    NonPositiveScale(f64),
    /// A Fock-space quantity was requested at the central frequency a = 0.
    ZeroFrequency,
    /// A radial profile whose Calderón or moment integral diverges.
    NotAdmissible(&'static str),
    /// Invalid parameters for a named family.
    BadParams(&'static str),
    /// Adaptive quadrature ran out of subdivisions.
    QuadratureFailed,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::ZeroQuaternion => write!(f, "zero quaternion has no inverse"),
            CoreError::NotUnit(n) => write!(f, "quaternion norm {n} is not 1"),
            CoreError::NonPositiveScale(r) => write!(f, "dilation parameter {r} must be positive"),
            CoreError::ZeroFrequency => write!(f, "central frequency a must be nonzero"),
            CoreError::NotAdmissible(why) => write!(f, "profile is not admissible: {why}"),
            CoreError::BadParams(why) => write!(f, "bad parameters: {why}"),
            CoreError::QuadratureFailed => write!(f, "adaptive quadrature did not converge"),
        }
    }
}

pub type Result<T> = core::result::Result<T, CoreError>;

impl core::error::Error for CoreError {}
