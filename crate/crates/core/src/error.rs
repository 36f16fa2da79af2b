use thiserror::Error;

/// Errors raised by the library. Every operation returns this type so the
/// CLI and the Python bindings can map variants to exit codes / exceptions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("formula syntax error at column {column}: {message}")]
    FormulaSyntax { column: usize, message: String },

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("symbol `{symbol}` has arity {expected}, got {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("element {element} is out of range for a domain of size {size}")]
    OutOfRange { element: usize, size: usize },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("free variable v{0} is not covered by the assignment")]
    UncoveredVariable(u32),

    #[error("free variable v{var} is outside v0..v{}", .bound.saturating_sub(1))]
    VariableOutOfRange { var: u32, bound: u32 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid bijection: {0}")]
    InvalidBijection(String),

    #[error("invalid linear order: {0}")]
    InvalidOrder(String),

    #[error("{what} exceeds the configured cap ({value} > {cap})")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("empty structure is not allowed here")]
    EmptyStructure,

    #[error("value out of range: {0}")]
    OutOfBounds(String),

    #[error("no definition given for symbol `{0}`")]
    MissingDefinition(String),

    #[error("definition of `{0}` is not quantifier-free")]
    NotQuantifierFree(String),

    #[error("definition of `{symbol}` uses symbol `{found}`; only `<` and `=` are allowed")]
    NotOrderFormula { symbol: String, found: String },

    #[error(
        "mixed pattern for `{symbol}`: {member:?} is a member but {non_member:?} is not, \
         although both have order pattern {pattern:?}"
    )]
    MixedPattern {
        symbol: String,
        pattern: Vec<u8>,
        member: Vec<usize>,
        non_member: Vec<usize>,
    },

    #[error("empty chain set")]
    EmptyChainSet,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
