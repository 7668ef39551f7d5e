use thiserror::Error;

/// Errors raised by the summability library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A determining sequence has a negative term or a non-positive partial sum.
    #[error("invalid determining sequence: {0}")]
    InvalidSequence(String),

    /// An index lies outside the range where a sequence can be evaluated in binary64.
    #[error("index {index} is outside the evaluable range: {reason}")]
    RangeExceeded { index: usize, reason: String },

    #[error("point {re}{im:+}i lies outside the closed unit disk")]
    PointOutsideDisk { re: f64, im: f64 },

    #[error("quadrature did not converge: successive refinements {coarse} and {fine} differ by relative {rel_diff:.3e} > {tolerance:.1e}")]
    QuadratureNotConverged {
        coarse: f64,
        fine: f64,
        rel_diff: f64,
        tolerance: f64,
    },

    #[error("power iteration did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    /// A closed-form bound was requested outside the hypotheses it was derived under.
    #[error("bound inapplicable: {0}")]
    BoundInapplicable(String),

    #[error("reference series of degree {degree} is too short for n = {n} (need degree >= {required})")]
    ReferenceTooShort { degree: usize, n: usize, required: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed mini-language input (sequence, weight, function or grid specs).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag used in CLI error rows.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSequence(_) => "invalid_sequence",
            Error::RangeExceeded { .. } => "range_exceeded",
            Error::PointOutsideDisk { .. } => "point_outside_disk",
            Error::QuadratureNotConverged { .. } => "quadrature_not_converged",
            Error::ConvergenceFailure { .. } => "convergence_failure",
            Error::BoundInapplicable(_) => "bound_inapplicable",
            Error::ReferenceTooShort { .. } => "reference_too_short",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
