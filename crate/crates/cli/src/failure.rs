use std::fmt;
use std::process::ExitCode;

/// Why a run did not succeed; each maps to its own exit code.
#[derive(Debug)]
pub enum Failure {
    /// Checks ran but some did not pass.
    Assertion(String),
    /// Bad parameters or unusable output path.
    Input(String),
    /// Quadrature or another numerical procedure did not converge.
    Numeric(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Assertion(_) => ExitCode::from(1),
            Failure::Input(_) => ExitCode::from(2),
            Failure::Numeric(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Assertion(m) => write!(f, "check failed: {m}"),
            Failure::Input(m) => write!(f, "invalid input: {m}"),
            Failure::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<fig8::Error> for Failure {
    fn from(e: fig8::Error) -> Self {
        match e {
            fig8::Error::Quadrature { .. } | fig8::Error::NonFinite => Failure::Numeric(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}
