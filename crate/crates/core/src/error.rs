use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The dense state would exceed the configured qubit cap.
    #[error("width exceeded: {requested} qubits requested, cap is {cap}")]
    WidthExceeded { requested: usize, cap: usize },

    #[error("bad qubit index: {0}")]
    BadIndex(String),

    #[error("value {value} does not fit in a {width}-qubit register")]
    ValueOutOfRange { value: u64, width: usize },

    #[error("register of width {width} cannot hold values up to {needed_value}")]
    WidthTooSmall { needed_value: u64, width: usize },

    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("ancillas not restored to zero (fidelity {fidelity})")]
    AncillaNotZero { fidelity: f64 },

    #[error("invalid error budget: {0}")]
    BudgetInvalid(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("arity mismatch: predicate takes {expected} bits, formula declares {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("variable `{0}` has zero width")]
    ZeroWidth(String),

    #[error("truth table length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("bad character {ch:?} in truth table at position {position}")]
    BadCharacter { ch: char, position: usize },

    #[error("truth table variables do not match formula: {0}")]
    VarsMismatch(String),

    #[error("unknown sweep axis `{0}` (expected M, n or density)")]
    BadAxis(String),

    #[error("program cannot be simulated block-wise: {0}")]
    NotFactorable(String),

    #[error("solution density {0} is outside [0, 1]")]
    InvalidDensity(f64),

    #[error("invalid amplitude vector: {0}")]
    InvalidState(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
