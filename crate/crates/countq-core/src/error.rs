use thiserror::Error;

/// Errors produced by predicate/graph/circuit parsing, exact arithmetic and
/// the simulation pipelines.
///
/// `Internal` is reserved for invariant violations (a construction whose
/// amplitude disagrees with its counting cross-check, a state whose norm
/// drifts from 1). Front ends map it to a distinct exit code because it
/// indicates a bug, not bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible scalars: {0}")]
    IncompatibleScalars(&'static str),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid field spec: {0}")]
    InvalidFieldSpec(String),
    #[error("no root isolator: {0}")]
    MissingRootIsolator(String),
    #[error("ambiguous root isolator: {0}")]
    AmbiguousRootIsolator(String),
    #[error("length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("witness width {m} exceeds cap {cap} (raise --max-witness-bits)")]
    WitnessCapExceeded { m: usize, cap: usize },
    #[error("state reached {terms} terms, exceeding cap {cap} (raise --max-terms)")]
    TermCapExceeded { terms: usize, cap: usize },
    #[error("graph has {v} vertices, exceeding cap {cap}")]
    VertexCapExceeded { v: usize, cap: usize },
    #[error("predicate has no witness bits; the gap convention needs m >= 1")]
    EmptyWitness,
    #[error("qubit {q} out of range for width {width}")]
    QubitOutOfRange { q: usize, width: usize },
    #[error("gate qubit indices must be distinct")]
    DuplicateQubit,
    #[error("oracle control and target bits overlap")]
    OverlappingOracleBits,
    #[error("matrix is not exactly unitary")]
    NonUnitary,
    #[error("probability not fixed by conjugation; the conjugation matrix is not a ring map")]
    ImaginaryProbability,
    #[error("decomposition unsupported: {0}")]
    DecompositionUnsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors that indicate a broken invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
