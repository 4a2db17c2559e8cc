use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial has no top term")]
    ZeroPolynomial,
    #[error("empty input")]
    EmptyInput,
    #[error("inputs are algebraically dependent")]
    DependentInputs,
    #[error("affine matrix is singular")]
    SingularAffine,
    #[error("tuple is not a tuple of components: {0}")]
    DegenerateTuple(String),
    #[error("not incident: {0}")]
    NotIncident(String),
    #[error("correcting polynomial is affine")]
    AffineP,
    #[error("vertices are not neighbors")]
    NotNeighbors,
    #[error("vertex is the identity vertex")]
    IdentityVertex,
    #[error("hypothesis not met: {0}")]
    HypothesesUnmet(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown variable `{name}` at {line}:{col}")]
    UnknownVariable { name: String, line: usize, col: usize },
    #[error("declared word does not evaluate to the listed components")]
    WitnessMismatch,
    #[error("invalid elementary factor: {0}")]
    InvalidElementary(String),
}

pub type Result<T> = std::result::Result<T, Error>;
