use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to parse problem: {0}")]
    Parse(String),

    #[error("invalid problem: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("problem is not unicast: x{message} is wanted by receivers {first} and {second}")]
    NotUnicast {
        message: usize,
        first: usize,
        second: usize,
    },

    #[error("wrong problem class: {0}")]
    WrongClass(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    /// An exhaustive search or materialization was refused because its size
    /// exceeds the configured cap.
    #[error("{what} needs {required}, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        required: String,
        cap: String,
    },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("not a constrained left inverse of A: {0}")]
    NotLeftInverse(String),

    #[error("not factorizable as B*F: {0}")]
    NotFactorizable(String),

    #[error("receiver {receiver} cannot decode x{want} from this code")]
    Undecodable { receiver: usize, want: usize },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Two independent methods disagreed. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn cap(what: &'static str, required: impl ToString, cap: impl ToString) -> Self {
        Error::CapExceeded {
            what,
            required: required.to_string(),
            cap: cap.to_string(),
        }
    }
}
