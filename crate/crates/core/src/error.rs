use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter failed validation before any computation started.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A tabulated envelope was queried outside its sample range.
    #[error("t = {t} lies outside the tabulated envelope range [{min}, {max}]")]
    OutOfRange { t: f64, min: f64, max: f64 },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} > tolerance {tolerance:e}")]
    NotConverged {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    /// The requested quantity diverges for the chosen kernel (delta-kernel μ and K terms).
    #[error("{quantity} is singular for the noninertial (delta) kernel")]
    SingularKernel { quantity: &'static str },

    /// Every linear phase is optimal: φ₁ = φ* = 0.
    #[error("optimal phase is undefined when φ₁ = φ* = 0")]
    DegeneratePhase,

    #[error("configuration error: {0}")]
    Config(String),

    /// Fock-space matrix side fails to approach the analytic closed form as n_max grows.
    #[error("truncation dominates: discrepancy {discrepancy:e} did not shrink with n_max")]
    Truncation { discrepancy: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. } | Error::SingularKernel { .. } | Error::Truncation { .. }
        )
    }
}
