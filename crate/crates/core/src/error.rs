use std::fmt;

use thiserror::Error;

/// Position of a parse error. Line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLocation {
    pub file: Option<String>,
    pub line: usize,
    pub column: usize,
}

impl SourceLocation {
    pub fn new(line: usize, column: usize) -> Self {
        SourceLocation {
            file: None,
            line,
            column,
        }
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(file) => write!(f, "{}:{}:{}", file, self.line, self.column),
            None => write!(f, "{}:{}", self.line, self.column),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    VariableInFact(String),
    UnknownPredicate(String),
    NotExtensional(String),
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    Unsafe(String),
    /// An OWL construct outside the supported subset, e.g. `complementOf`.
    Unsupported(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::VariableInFact(v) => write!(f, "variable {v} in fact"),
            ParseErrorKind::UnknownPredicate(p) => write!(f, "unknown predicate {p}"),
            ParseErrorKind::NotExtensional(p) => {
                write!(f, "{p} is an intensional predicate and cannot be asserted")
            }
            ParseErrorKind::ArityMismatch {
                predicate,
                expected,
                found,
            } => write!(f, "{predicate} expects {expected} arguments, found {found}"),
            ParseErrorKind::Unsafe(m) => write!(f, "unsafe query: {m}"),
            ParseErrorKind::Unsupported(c) => write!(f, "unsupported construct: {c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {kind}")]
pub struct ParseError {
    pub location: SourceLocation,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError {
            location: SourceLocation::new(line, column),
            kind,
        }
    }

    pub fn with_file(mut self, file: impl Into<String>) -> Self {
        self.location.file = Some(file.into());
        self
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("arity mismatch in {atom}: expected {expected}, found {found}")]
    ArityMismatch {
        atom: String,
        expected: usize,
        found: usize,
    },
    #[error("fact {0} is not ground")]
    NonGround(String),
    #[error("{0} is not an extensional predicate")]
    NotExtensional(String),
    #[error("{0}")]
    Unsafe(String),
    #[error("query body is empty")]
    EmptyBody,
    #[error("evaluation exceeded {limit} tabled call patterns")]
    ResourceExhausted { limit: usize },
    #[error("{predicate} has no argument {position}")]
    NoSuchArgument { predicate: String, position: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("query has {len} subgoals, more than the enumeration bound {bound}")]
    TooManySubgoals { len: usize, bound: usize },
    #[error("catalog has no statistics for {0}")]
    CatalogMiss(String),
    #[error("malformed catalog line {line}: {message}")]
    CatalogFormat { line: usize, message: String },
    #[error("subplans cover different atom sets")]
    NonEquivalentSubplans,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
