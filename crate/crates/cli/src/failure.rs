use w6h_core::{ModelError, SessionError, StorageError};

/// Exit status 1: findings or a rejected state change.
pub const FINDINGS: u8 = 1;
/// Exit status 2: bad usage or unreadable input.
pub const USAGE: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: USAGE,
            message: message.into(),
        }
    }

    pub fn state(message: impl Into<String>) -> Self {
        Failure {
            code: FINDINGS,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::usage(err.to_string())
    }
}

impl From<StorageError> for Failure {
    fn from(err: StorageError) -> Self {
        Failure::usage(err.to_string())
    }
}

impl From<SessionError> for Failure {
    fn from(err: SessionError) -> Self {
        Failure::state(format!("{}: {err}", err.code()))
    }
}

impl From<ModelError> for Failure {
    fn from(err: ModelError) -> Self {
        Failure::state(format!("{}: {err}", err.code()))
    }
}
