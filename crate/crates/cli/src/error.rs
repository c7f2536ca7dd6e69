//! Runner errors mapped onto the documented exit codes.

use hybrid_opa::ModelError;

#[derive(Debug)]
pub enum CliError {
    /// Config parse or schema problem (exit 1).
    Config(String),
    /// Physics-level validation failure (exit 1).
    Physics(ModelError),
    /// Oracle disagreement beyond tolerance (exit 2).
    Oracle(String),
    /// Filesystem problem (exit 3).
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Physics(_) => 1,
            CliError::Oracle(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Physics(e) => write!(f, "physics validation error: {e}"),
            CliError::Oracle(msg) => write!(f, "oracle failure: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Physics(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
