use std::fmt;
use std::path::Path;

use oat_core::Error;
use serde_json::json;

pub const EXIT_CHECK: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// A command failure with its exit code and a machine-readable kind.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn io(path: &Path, err: std::io::Error) -> Failure {
        Failure {
            code: EXIT_IO,
            kind: "Io".into(),
            message: format!("{}: {err}", path.display()),
        }
    }

    pub fn config(message: String) -> Failure {
        Failure {
            code: EXIT_VALIDATION,
            kind: "InvalidConfig".into(),
            message,
        }
    }

    pub fn check(message: String) -> Failure {
        Failure {
            code: EXIT_CHECK,
            kind: "CheckFailed".into(),
            message,
        }
    }

    pub fn to_json(&self) -> String {
        json!({
            "error": self.kind,
            "exit_code": self.code,
            "message": self.message,
        })
        .to_string()
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            code: EXIT_VALIDATION,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}
