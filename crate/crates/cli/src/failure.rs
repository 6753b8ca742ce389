use std::fmt;

/// Why a command stopped; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or configuration (exit 2).
    Usage(String),
    /// Ran to completion but a check failed (exit 1).
    Checks(String),
    /// Numerical or I/O failure while running (exit 1).
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Checks(_) | Failure::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Checks(m) => write!(f, "check failure: {m}"),
            Failure::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

/// Library domain errors come from arguments the caller chose, so they are
/// usage errors; everything else is a runtime failure.
impl From<fracdrift::Error> for Failure {
    fn from(e: fracdrift::Error) -> Self {
        match e {
            fracdrift::Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}
