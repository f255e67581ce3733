use std::fmt;
use std::path::PathBuf;

/// Failure categories mapped onto the process exit codes: configuration and
/// physics rejections exit 1, usage errors exit 2 (raised by the argument
/// parser before this type is involved), oracle mismatches exit 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Physics(vortex_mbx::Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    OracleMismatch,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Physics(_) | CliError::Io { .. } => 1,
            CliError::OracleMismatch => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Physics(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::OracleMismatch => write!(f, "oracle suite reported a mismatch"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<vortex_mbx::Error> for CliError {
    fn from(e: vortex_mbx::Error) -> Self {
        CliError::Physics(e)
    }
}
