use thiserror::Error;

/// Errors raised across the crate. Each message is prefixed with the module
/// that produced it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("seqalg: base must be nonzero")]
    ZeroBase,
    #[error("seqalg: anchor mismatch ({left} vs {right})")]
    AnchorMismatch { left: i64, right: i64 },
    #[error("seqalg: degree {0} exceeds the Stirling table")]
    DegreeOverflow(usize),

    #[error("lindiff: degenerate recurrence ({0})")]
    DegenerateRecurrence(String),
    #[error("lindiff: characteristic roots not representable exactly ({0})")]
    InexactRoots(String),
    #[error("lindiff: singular ansatz system for forcing base {base}")]
    SingularAnsatz { base: String },
    #[error("lindiff: expected {expected} initial values, got {got}")]
    InitialLength { expected: usize, got: usize },
    #[error("lindiff: singular Casorati system")]
    SingularCasorati,

    #[error("renorm: secular term on base {base} has no attached amplitude")]
    UnmatchedSecularMode { base: String },
    #[error("renorm: mode {mode} is not a simple characteristic root")]
    NotAHomogeneousMode { mode: String },
    #[error("renorm: {0}")]
    Unsupported(String),
    #[error("renorm: singular boundary system")]
    SingularBoundary,
    #[error("renorm: boundary conditions cannot be met ({0})")]
    BoundaryUnsatisfiable(String),
    #[error("renorm: expected {expected} conditions for the free constants, got {got}")]
    BoundaryCount { expected: usize, got: usize },

    #[error("cases: parameter {name} = {value} out of range ({reason})")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("cases: invalid case document ({0})")]
    InvalidConfig(String),
    #[error("cases: unknown case {0:?}")]
    UnknownCase(String),
    #[error("cases: trajectory diverged at n = {n} (|y| = {value:e})")]
    Divergence { n: usize, value: f64 },

    #[error("verify: {0}")]
    Verify(String),
}

pub type Result<T> = std::result::Result<T, Error>;
