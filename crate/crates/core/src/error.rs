use thiserror::Error;

use crate::predicates::CheckReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. [`Error::code`] gives the stable
/// upper-case identifier used in CLI diagnostics and JSON reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed grade literal `{0}`")]
    MalformedGrade(String),
    #[error("grade `{0}` is outside [0,1]")]
    OutOfRange(String),
    #[error("invalid event name `{0}`")]
    InvalidEventName(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("duplicate event `{0}`")]
    DuplicateEvent(String),
    #[error("alphabet constraint violated: {0}")]
    InvalidAlphabet(String),
    #[error("fuzzy language must grade `eps` at 1, found {0}")]
    P1Violation(String),
    #[error("string `{string}` graded {grade} exceeds its prefix `{prefix}` graded {prefix_grade}")]
    P2Violation {
        string: String,
        grade: String,
        prefix: String,
        prefix_grade: String,
    },
    #[error("string `{0}` listed more than once")]
    DuplicateString(String),
    #[error("operands are defined over different alphabets")]
    AlphabetMismatch,
    #[error("language is empty")]
    EmptyLanguage,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("not a sublanguage: `{string}` graded {lhs} exceeds {rhs}")]
    NotSublanguage { string: String, lhs: String, rhs: String },
    #[error("site specification violated: {0}")]
    SiteCoverViolation(String),
    #[error("alphabet has no site specification")]
    MissingSites,
    #[error("supervisor row for `{row}` must enable uncontrollable event `{event}` at 1")]
    UncontrollablePin { row: String, event: String },
    #[error("synthesis precondition failed: {} does not hold", .0.property)]
    ConditionViolated(Box<CheckReport>),
    #[error("specification language is empty")]
    EmptySpec,
    #[error("supervisor has no row for observation `{0}`")]
    SupervisorDomainGap(String),
    #[error("containment chain L_a <= L_l <= L violated: {0}")]
    PreconditionChain(String),
    #[error("minimal acceptable language is empty")]
    EmptyMinSpec,
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("string set is not prefix-closed: `{0}` lacks its prefixes")]
    NotPrefixClosed(String),
    #[error("language `{0}` has grades other than 0 and 1")]
    NotCrisp(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("{name}: {source}")]
    Entity { name: String, source: Box<Error> },
    #[error("line {line}, column {column}: {source}")]
    Located {
        line: usize,
        column: usize,
        source: Box<Error>,
    },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedGrade(_) => "MALFORMED_GRADE",
            Error::OutOfRange(_) => "OUT_OF_RANGE",
            Error::InvalidEventName(_) => "INVALID_EVENT_NAME",
            Error::UnknownEvent(_) => "UNKNOWN_EVENT",
            Error::DuplicateEvent(_) => "DUPLICATE_EVENT",
            Error::InvalidAlphabet(_) => "INVALID_ALPHABET",
            Error::P1Violation(_) => "P1_VIOLATION",
            Error::P2Violation { .. } => "P2_VIOLATION",
            Error::DuplicateString(_) => "DUPLICATE_STRING",
            Error::AlphabetMismatch => "ALPHABET_MISMATCH",
            Error::EmptyLanguage => "EMPTY_LANGUAGE",
            Error::UnknownState(_) => "UNKNOWN_STATE",
            Error::DuplicateState(_) => "DUPLICATE_STATE",
            Error::NotSublanguage { .. } => "NOT_SUBLANGUAGE",
            Error::SiteCoverViolation(_) => "SITE_COVER_VIOLATION",
            Error::MissingSites => "MISSING_SITES",
            Error::UncontrollablePin { .. } => "UNCONTROLLABLE_PIN",
            Error::ConditionViolated(_) => "CONDITION_VIOLATED",
            Error::EmptySpec => "EMPTY_SPEC",
            Error::SupervisorDomainGap(_) => "SUPERVISOR_DOMAIN_GAP",
            Error::PreconditionChain(_) => "PRECONDITION_CHAIN",
            Error::EmptyMinSpec => "EMPTY_MIN_SPEC",
            Error::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            Error::NotPrefixClosed(_) => "NOT_PREFIX_CLOSED",
            Error::NotCrisp(_) => "NOT_CRISP",
            Error::Syntax(_) => "SYNTAX_ERROR",
            Error::Entity { source, .. } | Error::Located { source, .. } => source.code(),
        }
    }

    /// The innermost error, with location and entity wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Entity { source, .. } | Error::Located { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn at(self, line: usize, column: usize) -> Error {
        Error::Located {
            line,
            column,
            source: Box::new(self),
        }
    }

    pub fn in_entity(self, name: impl Into<String>) -> Error {
        Error::Entity {
            name: name.into(),
            source: Box::new(self),
        }
    }
}
