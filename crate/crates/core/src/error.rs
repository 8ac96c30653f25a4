//! Crate-wide error type.
//!
//! Variants are grouped by failure class so callers (service, CLI) can map
//! them onto wire error kinds and process exit codes without string matching.

use std::path::PathBuf;

/// Failure class, used by the service/CLI layers for status and exit-code
/// mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed program text or program JSON.
    Syntax,
    /// A target name the registry cannot resolve, or a structurally invalid
    /// program (property placement and friends).
    UnsupportedTarget,
    /// Scene file I/O, scene schema, raster, or detector backend trouble.
    Scene,
    /// Program library trouble (missing entry, collision, bad name).
    Library,
    /// LLM transport or response-shape trouble.
    Llm,
    /// Everything else.
    Internal,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown target `{name}`{}", format_suggestions(suggestions))]
    UnknownTarget {
        name: String,
        suggestions: Vec<String>,
    },

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("scene error: {0}")]
    Scene(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("registry error: {0}")]
    Registry(String),

    #[error("selection error: {0}")]
    Selection(String),

    #[error("library error: {0}")]
    Library(String),

    #[error("llm error: {0}")]
    Llm(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Coarse failure class for status/exit-code mapping.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Syntax { .. } => ErrorClass::Syntax,
            Error::UnknownTarget { .. } | Error::InvalidProgram(_) => ErrorClass::UnsupportedTarget,
            Error::Schema { .. } | Error::Scene(_) | Error::Io { .. } => ErrorClass::Scene,
            Error::Registry(_) | Error::Internal(_) => ErrorClass::Internal,
            Error::Selection(_) => ErrorClass::Scene,
            Error::Library(_) => ErrorClass::Library,
            Error::Llm(_) => ErrorClass::Llm,
        }
    }
}

fn format_suggestions(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!(" (did you mean: {}?)", suggestions.join(", "))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
