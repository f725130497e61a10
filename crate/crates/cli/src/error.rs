use std::fmt;

/// Failure classes of the command-line tool, each with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Unreadable or malformed input (exit 2).
    Parse(String),
    /// Input that parses but violates a scenario rule (exit 2).
    Validation(String),
    /// Integration, quadrature or algebra failure (exit 3).
    Numerical(String),
    /// A requested identity or criterion check failed (exit 1).
    Verification(String),
    /// Output could not be written (exit 3).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Parse(_) | CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Verification(_) => "verification",
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::Validation(m)
            | CliError::Numerical(m)
            | CliError::Verification(m)
            | CliError::Io(m) => m,
        }
    }

    /// One-line JSON diagnostic for the error stream.
    pub fn diagnostic(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.message(),
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<qchar_core::Error> for CliError {
    fn from(e: qchar_core::Error) -> Self {
        use qchar_core::Error as E;
        match e {
            E::NotPositiveDefinite
            | E::BasisViolation { .. }
            | E::DegenerateConstraints
            | E::NonHermitian(_)
            | E::BadDimension(_)
            | E::DimensionMismatch { .. }
            | E::IndexOutOfRange { .. } => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
