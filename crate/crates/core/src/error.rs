use thiserror::Error;

/// Errors produced by the algebraic pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("letter {letter} is outside the alphabet of size {alphabet}")]
    InvalidWord { letter: usize, alphabet: usize },
    #[error("state {state} is outside [0, {n})")]
    InvalidState { state: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("undefined: {0}")]
    Undefined(&'static str),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition is not a congruence")]
    NotACongruence,
    #[error("automaton is not synchronizing")]
    NotSynchronizing,
    #[error("automaton is not semisimple")]
    NotSemisimple,
    #[error("transition monoid exceeds the cap of {cap} elements")]
    MonoidTooLarge { cap: usize },
    #[error("subset search exceeds the cap of {cap} states")]
    SearchTooLarge { cap: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("Wedderburn decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("ambiguous numerical separation in component {component}: distance {distance:e}")]
    ToleranceAmbiguity { component: usize, distance: f64 },
    #[error("class {class} of component {component} has no representative")]
    RepresentationFailure { component: usize, class: usize },
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("search budget exhausted; value lies in [{lower}, {upper}]")]
    BudgetExceeded { lower: usize, upper: usize },
    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("structural invariant failed: {0}")]
    InvariantViolated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
