use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value violates a documented constraint. `field` is a dotted path
    /// into the scenario document where one is known.
    #[error("{field} = {value} {constraint}")]
    Validation {
        field: String,
        value: String,
        constraint: String,
    },

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unreachable target under zero learning")]
    UnreachableTarget,

    #[error("unknown {kind} `{token}` (expected one of: {expected})")]
    UnknownToken {
        kind: &'static str,
        token: String,
        expected: String,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown key(s) in scenario document: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(
        field: impl Into<String>,
        value: impl ToString,
        constraint: impl Into<String>,
    ) -> Self {
        Error::Validation {
            field: field.into(),
            value: value.to_string(),
            constraint: constraint.into(),
        }
    }

    /// Prefix the field path of a validation error, e.g. `learning_rate`
    /// becomes `stacks.curves.western_pem.learning_rate`.
    pub fn at(self, prefix: &str) -> Self {
        match self {
            Error::Validation {
                field,
                value,
                constraint,
            } => Error::Validation {
                field: if field.is_empty() {
                    prefix.to_string()
                } else {
                    format!("{prefix}.{field}")
                },
                value,
                constraint,
            },
            other => other,
        }
    }

    /// True for errors caused by user-supplied values rather than malformed
    /// documents or I/O.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation { .. }
                | Error::Domain(_)
                | Error::UnreachableTarget
                | Error::UnknownToken { .. }
                | Error::UnknownKeys(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: strip_position(&err.to_string()),
        }
    }
}

// serde_json appends " at line L column C"; the position is carried separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(idx) => message[..idx].to_string(),
        None => message.to_string(),
    }
}
