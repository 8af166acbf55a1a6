use std::fmt;

use thiserror::Error;

/// Location and description of a syntax error in expression source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("undeclared identifier `{0}`")]
    UndeclaredIdentifier(String),

    #[error("invalid context: {0}")]
    Context(String),

    #[error("derivative cap {cap} exceeded by `{what}`")]
    DerivativeCap { what: String, cap: u32 },

    #[error("division by a non-monomial expression `{0}`")]
    NonMonomialDenominator(String),

    #[error("unsupported power: {0}")]
    UnsupportedPower(String),

    #[error("substitution did not terminate after {0} rounds (cyclic bindings)")]
    Cycle(usize),

    #[error("expression `{0}` contains no jet variable")]
    NoJetVariable(String),

    #[error("dependent variable `{0}` is not bound by the ansatz")]
    UnboundDependent(String),

    #[error("operation requires {0}")]
    Unsupported(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("prolongation cap {cap} is below equation order {order}")]
    CapBelowOrder { cap: u32, order: u32 },

    #[error("Groebner basis budget of {0} S-pairs exceeded")]
    Budget(usize),

    #[error("symbol division failed: {0}")]
    SymbolDivision(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
