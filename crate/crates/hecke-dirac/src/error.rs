use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value is not rational")]
    NotRational,
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("unknown irrep `{0}`")]
    UnknownIrrep(String),
    #[error("matrices do not define a representation: {0}")]
    NotARepresentation(String),
    #[error("no vector moved by element {0}")]
    DegenerateWitness(usize),
    #[error("element is not in the group")]
    WordRequired,
    #[error("element is not in the kernel of d")]
    NotInKernel,
    #[error("linear system has {unknowns} unknowns, limit is {limit}")]
    SolverOverflow { unknowns: usize, limit: usize },
    #[error("zero-scalar window needs degree cap at least {min_k}")]
    WindowExceedsCap { min_k: usize },
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("family fails the PBW conditions {0:?}")]
    NotPbw(Vec<u8>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
