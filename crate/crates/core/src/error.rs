use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },
    #[error("expected {expected} vectors for contraction, got {got}")]
    WrongVectorCount { expected: usize, got: usize },
    #[error("tensor has {got} entries but dims {dims:?} require {expected}")]
    EntryCount {
        dims: Vec<usize>,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value at {0}")]
    NonFinite(String),
    #[error("tensor dims {0:?} are not uniform")]
    NotSquare(Vec<usize>),
    #[error("order {0} is too large to symmetrize (maximum 8)")]
    OrderTooLarge(usize),
    #[error("invalid feasible set: {0}")]
    InvalidSet(String),
    #[error("Dykstra projection did not converge in {iterations} iterations (last change {last_change:e})")]
    ProjectionNotConverged { iterations: usize, last_change: f64 },
    #[error("operation requires order {required}, tensor has order {actual}")]
    OrderRequirement { required: &'static str, actual: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported set for this operation: {0}")]
    UnsupportedSet(&'static str),
    #[error("{pointer}: {message}")]
    Parse { pointer: String, message: String },
}

impl Error {
    pub(crate) fn dims(expected: usize, got: usize, context: &'static str) -> Self {
        Error::DimensionMismatch {
            expected,
            got,
            context,
        }
    }
}
