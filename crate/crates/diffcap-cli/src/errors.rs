use std::fmt;

/// CLI-level error with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid arguments or config (exit 2).
    Usage(String),
    /// A solver could not produce a result (exit 3).
    Solver(String),
    /// I/O failure (exit 1).
    Io(String),
    /// Downstream reader closed the pipe; exit quietly with success.
    Pipe,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 1,
            CliError::Pipe => 0,
        }
    }

    pub fn is_silent(&self) -> bool {
        matches!(self, CliError::Pipe)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Solver(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Pipe => write!(f, "broken pipe"),
        }
    }
}

impl From<diffcap::Error> for CliError {
    fn from(e: diffcap::Error) -> Self {
        match e {
            diffcap::Error::Domain(_) => CliError::Usage(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::Pipe
        } else {
            CliError::Io(e.to_string())
        }
    }
}
