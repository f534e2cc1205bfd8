use std::fmt;
use std::path::PathBuf;

use spinfano::{Error, ValidationErrors};

/// Exit statuses: 1 bad input, 2 numerical failure, 64 usage, 66 unreadable
/// config, 73 output not writable.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Unreadable { path: PathBuf, source: std::io::Error },
    /// (key, message) pairs.
    Invalid(Vec<(String, String)>),
    Numerical(String),
    Output(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Usage(_) => 64,
            Failure::Unreadable { .. } => 66,
            Failure::Output(_) => 73,
        }
    }

    pub fn invalid(key: impl Into<String>, message: impl Into<String>) -> Self {
        Failure::Invalid(vec![(key.into(), message.into())])
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Unreadable { path, source } => {
                write!(f, "cannot read config {}: {source}", path.display())
            }
            Failure::Invalid(items) => {
                for (i, (key, msg)) in items.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "invalid `{key}`: {msg}")?;
                }
                Ok(())
            }
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Output(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

impl From<ValidationErrors> for Failure {
    fn from(e: ValidationErrors) -> Self {
        Failure::Invalid(e.0.into_iter().map(|f| (f.field, f.message)).collect())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            return Failure::Numerical(e.to_string());
        }
        match e {
            Error::Validation(v) => v.into(),
            other => Failure::invalid("input", other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Output(e.to_string())
    }
}
