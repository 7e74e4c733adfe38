use thiserror::Error;

use crate::params::Family;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("parameter `{name}` is not finite ({value})")]
    NonFinite { name: &'static str, value: f64 },
    #[error("sigma = 1 is excluded: the utility function is (c^(1-sigma) - 1)/(1 - sigma) with sigma != 1")]
    SigmaOne,
    #[error("sigma = beta = {value} is excluded: no closed form of the three families covers sigma = beta")]
    SigmaEqualsBeta { value: f64 },
    #[error("constraint `{constraint}` violated ({lhs} vs {rhs})")]
    OutOfRange { constraint: &'static str, lhs: f64, rhs: f64 },
    #[error("parameters are not admissible for the {family} family (violated: {violated:?})")]
    NotAdmissible { family: Family, violated: Vec<&'static str> },
    #[error("invalid initial value `{name}` = {value}")]
    InvalidInitial { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not converge: error estimate {achieved:e} above target {requested:e} after {evaluations} evaluations")]
    NonConvergence { achieved: f64, requested: f64, evaluations: usize },
    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },
    #[error("invalid quadrature interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZPathError {
    #[error("z(t) bracket degenerated to {value} at t = {t}")]
    DegenerateBracket { t: f64, value: f64 },
    #[error("decay rate {rate} must be positive for the improper integral to exist")]
    NonPositiveDecay { rate: f64 },
    #[error("time must be finite and non-negative, got {t}")]
    NegativeTime { t: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    ZPath(#[from] ZPathError),
    #[error("consistency bracket is singular ({value:e}); u0 cannot be solved for")]
    SingularBracket { value: f64 },
    #[error("pinned u0 = {value} is not positive")]
    NegativeU0 { value: f64 },
    #[error("improper-integral limits are inconsistent: G_inf = {g_inf} must exceed F_inf = {f_inf}")]
    DegenerateLimits { f_inf: f64, g_inf: f64 },
    #[error("the denominator of u(t) is not positive or not finite at t = {t}")]
    DenominatorUnderflow { t: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegratorError {
    #[error("step size {h:e} underflowed at t = {t}")]
    StepUnderflow { t: f64, h: f64 },
    #[error("state component `{component}` left the positive orthant at t = {t}")]
    NonpositiveState { t: f64, component: &'static str },
    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },
    #[error("step budget of {max_steps} exhausted at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("tolerance {tol:e} outside the supported range [1e-13, 1e-3]")]
    InvalidTolerance { tol: f64 },
    #[error("output times must be finite, non-negative and increasing")]
    InvalidGrid,
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("finite differences are dominated by truncation error for `{equation}` at t = {t} (estimate {estimate:e})")]
    GridTooCoarse { equation: &'static str, t: f64, estimate: f64 },
    #[error("checkpoints must be non-empty, finite and strictly increasing")]
    InvalidCheckpoints,
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
}

/// Any failure raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    ZPath(#[from] ZPathError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl Error {
    /// True when the failure is a parameter or initial-value problem rather
    /// than a numerical-method failure.
    pub fn is_validation(&self) -> bool {
        fn zpath(e: &ZPathError) -> bool {
            matches!(e, ZPathError::Param(_) | ZPathError::NonPositiveDecay { .. } | ZPathError::NegativeTime { .. })
        }
        match self {
            Error::Param(_) => true,
            Error::ZPath(e) => zpath(e),
            Error::ClosedForm(ClosedFormError::Param(_)) | Error::ClosedForm(ClosedFormError::NegativeU0 { .. }) => true,
            Error::ClosedForm(ClosedFormError::ZPath(e)) => zpath(e),
            Error::Integrator(IntegratorError::Param(_))
            | Error::Integrator(IntegratorError::InvalidTolerance { .. })
            | Error::Integrator(IntegratorError::InvalidGrid) => true,
            Error::Verify(VerifyError::Param(_)) | Error::Verify(VerifyError::InvalidCheckpoints) => true,
            Error::Verify(VerifyError::ClosedForm(e)) => Error::ClosedForm(e.clone()).is_validation(),
            Error::Verify(VerifyError::Integrator(e)) => Error::Integrator(e.clone()).is_validation(),
            _ => false,
        }
    }
}
