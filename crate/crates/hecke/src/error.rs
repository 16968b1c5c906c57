use std::fmt;
use std::io;

/// Everything the front end can fail with, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config { line: usize, message: String },
    Core(hecke_core::Error),
    Io(io::Error),
    /// Number of failed checks.
    VerifyFailed(usize),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 usage error, 3 resource or budget error.
    pub fn exit_code(&self) -> i32 {
        use hecke_core::Error as E;
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Usage(_) | CliError::Config { .. } => 2,
            CliError::Io(_) => 3,
            CliError::Core(e) => match e {
                E::WorkBudgetExceeded { .. }
                | E::QuadratureBudget { .. }
                | E::FactorBoundExceeded { .. }
                | E::ResidueBoundExceeded { .. }
                | E::ThresholdNotFound { .. }
                | E::Policy(_)
                | E::Overflow => 3,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config { line, message } => write!(f, "config line {line}: {message}"),
            CliError::Core(hecke_core::Error::WorkBudgetExceeded { pairs, budget }) => write!(
                f,
                "work budget exceeded ({pairs} pairs > {budget}); try --method poisson or raise the budget"
            ),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::VerifyFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hecke_core::Error> for CliError {
    fn from(e: hecke_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
