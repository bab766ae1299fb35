use thiserror::Error;

/// A DSL problem at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct DslError {
    pub line: usize,
    pub column: usize,
    pub kind: DslErrorKind,
}

impl DslError {
    pub fn new(line: usize, column: usize, kind: DslErrorKind) -> Self {
        Self { line, column, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate declaration of `{0}`")]
    DuplicateDeclaration(String),
    #[error("use of undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("fact `{label}` mentions rate variable `{var}`")]
    FactMentionsVariable { label: String, var: String },
    #[error("inequality `{0}` is a contradiction")]
    Contradiction(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error("duplicate declaration of `{0}`")]
    DuplicateDeclaration(String),
    #[error("use of undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("`{0}` is not a declared variable")]
    UnknownVariable(String),
    #[error("variable `{0}` listed twice for elimination")]
    RepeatedVariable(String),
    #[error("replacement for `{0}` refers to `{0}` itself")]
    SelfReference(String),
    #[error("inequality `{label}` reduces to a contradiction")]
    Contradiction { label: String },
    #[error("system is infeasible together with its facts; pruning is undefined")]
    Infeasible,
    #[error("symbol tables differ")]
    TableMismatch,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("fact `{label}` mentions rate variable `{var}`")]
    FactMentionsVariable { label: String, var: String },
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("certificate text, line {line}: {message}")]
    CertificateFormat { line: usize, message: String },
    #[error("fixture `{0}` failed its integrity check")]
    FixtureCorrupt(String),
    #[error("invalid channel dimensions: {0}")]
    InvalidDims(String),
    #[error("no valid channel instance after {attempts} draws")]
    ResampleBudgetExceeded { attempts: usize },
    #[error("unknown stage {0}")]
    UnknownStage(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
