use crate::numeric::NumericError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("jet too short: need order {needed}, have {available}")]
    JetTooShort { needed: usize, available: usize },
    #[error("parity error: {0}")]
    Parity(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("ambiguous degree: leading coefficient encloses zero")]
    AmbiguousDegree,
    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("pole: {0}")]
    Pole(&'static str),
    #[error("Xi jet methods disagree at order {order}")]
    MethodDisagreement { order: usize },
    #[error("quadrature too coarse: {0}")]
    QuadratureTooCoarse(String),
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
    #[error("no coefficient decay bound attached to jet `{0}`")]
    TailBoundUnavailable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
