use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not reach tolerance: estimate {estimate:e}, error bound {error_bound:e}")]
    QuadratureNotConverged { estimate: f64, error_bound: f64 },

    #[error("no sign change on [{lower}, {upper}]")]
    NoSignChange { lower: f64, upper: f64 },

    #[error("non-finite function value at {at}")]
    NonFinite { at: f64 },

    #[error("augmented Jacobian is singular")]
    SingularJacobian,

    #[error("Newton iteration stopped after {iterations} steps with residual {residual:e}")]
    NewtonNotConverged { iterations: usize, residual: f64 },

    #[error("abscissa {0} outside [-1, 1]")]
    OutOfDomain(f64),

    #[error("line x2 = {slope} x1 + {intercept} misses the body")]
    LineMissesBody { slope: f64, intercept: f64 },

    #[error("origin is not an interior point of the body")]
    OriginNotInterior,

    #[error("profile is not concave: largest second difference {margin:e}")]
    NotConcave { margin: f64 },

    #[error("level shift violates the branch condition at t = {t}: |shift''| = {curvature} >= {bound}")]
    BranchCondition { t: f64, curvature: f64, bound: f64 },

    #[error("bump support [{lo}, {hi}] is not contained in {region}")]
    SupportViolation { lo: f64, hi: f64, region: &'static str },

    #[error("no epsilon above {floor:e} passed the concavity and chord-window checks")]
    EpsilonUnderflow { floor: f64 },

    #[error("moment solve failed: {reason}")]
    MomentSolve {
        reason: String,
        history: alloc::vec::Vec<f64>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
