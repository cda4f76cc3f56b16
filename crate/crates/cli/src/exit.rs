//! Process exit codes and the error type that carries them.

use std::fmt::Display;

pub const OK: u8 = 0;
/// Usage, configuration, kernel and output-writing failures.
pub const OTHER: u8 = 1;
pub const INGEST: u8 = 2;
pub const MODEL: u8 = 3;
/// Malformed CSV, labels or training data.
pub const DATA: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Self {
            code,
            error: error.into(),
        }
    }

    pub fn msg(code: u8, msg: impl Display) -> Self {
        Self::new(code, anyhow::anyhow!("{msg}"))
    }
}

/// Code implied by the library error alone.
pub fn code_for(err: &lungct::Error) -> u8 {
    use lungct::{Error, ErrorKind};
    match (err, err.kind()) {
        (Error::Config(_), _) => OTHER,
        (_, ErrorKind::Ingest) => INGEST,
        (_, ErrorKind::Model) => MODEL,
        (_, ErrorKind::Data) => DATA,
        (_, ErrorKind::Kernel | ErrorKind::Io) => OTHER,
    }
}

pub trait Context<T> {
    /// Failure with the code the error kind implies.
    fn or_fail(self, what: impl Display) -> Result<T, Failure>;
    /// Failure with a fixed code, whatever the error kind.
    fn or_exit(self, code: u8, what: impl Display) -> Result<T, Failure>;
}

impl<T> Context<T> for lungct::Result<T> {
    fn or_fail(self, what: impl Display) -> Result<T, Failure> {
        self.map_err(|e| {
            let code = code_for(&e);
            Failure::new(code, anyhow::Error::new(e).context(what.to_string()))
        })
    }

    fn or_exit(self, code: u8, what: impl Display) -> Result<T, Failure> {
        self.map_err(|e| Failure::new(code, anyhow::Error::new(e).context(what.to_string())))
    }
}

impl<T> Context<T> for std::io::Result<T> {
    fn or_fail(self, what: impl Display) -> Result<T, Failure> {
        self.or_exit(OTHER, what)
    }

    fn or_exit(self, code: u8, what: impl Display) -> Result<T, Failure> {
        self.map_err(|e| Failure::new(code, anyhow::Error::new(e).context(what.to_string())))
    }
}
