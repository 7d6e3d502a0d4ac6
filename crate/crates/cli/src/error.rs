use std::fmt;

use serde::Serialize;

/// Exit code for usage and validation errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for failed verification checks and runtime failures.
pub const EXIT_FAILURE: i32 = 1;

/// An error as reported on stderr: `{"code": ..., "message": ...}` on one line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub code: String,
    pub message: String,
    #[serde(skip)]
    pub exit: i32,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: "Usage".into(),
            message: message.into(),
            exit: EXIT_USAGE,
        }
    }

    pub fn io(err: std::io::Error, what: &str) -> Self {
        CliError {
            code: "Io".into(),
            message: format!("{what}: {err}"),
            exit: EXIT_FAILURE,
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError {
            code: "VerificationFailed".into(),
            message: message.into(),
            exit: EXIT_FAILURE,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("error serialises")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<qwskel::Error> for CliError {
    fn from(err: qwskel::Error) -> Self {
        use qwskel::Error as E;
        let exit = match err {
            E::QuadratureFailure { .. } | E::UndefinedTransitionReached { .. } => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        CliError {
            code: err.code().into(),
            message: err.to_string(),
            exit,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
