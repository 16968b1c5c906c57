use core::fmt;

/// Failures reported by the library. Every variant is an input or resource
/// problem; internal invariant breaks panic instead.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An exact integer intermediate left the supported range.
    Overflow,
    DivisionByZero,
    /// `gcd(0, 0)` has no canonical generator.
    GcdOfZeros,
    /// The operation requires an element of odd norm.
    EvenNorm,
    /// The operation requires a primary element (`n = 1 mod (1+i)^3`).
    NotPrimary,
    /// Factorization of zero was requested.
    FactorZero,
    FactorBoundExceeded { norm: u64, bound: u64 },
    ResidueBoundExceeded { norm: u64, bound: u64 },
    /// No fourth root of unity matched the Euler criterion, so the modulus
    /// was not prime.
    NotPrime,
    /// A brute-force Gauss sum came out with a non-negligible imaginary part.
    ComplexGaussSum { imag: f64 },
    /// Adaptive quadrature did not reach its tolerance within the panel budget.
    QuadratureBudget { panels: usize },
    /// The decay scan never dropped below the requested level.
    ThresholdNotFound { eps: f64 },
    /// The direct evaluator would exceed its work budget; use the dual path.
    WorkBudgetExceeded { pairs: u64, budget: u64 },
    /// A truncation policy that cannot be honoured.
    Policy(&'static str),
    /// An argument outside the operation's domain.
    Domain(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Overflow => write!(f, "integer overflow"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::GcdOfZeros => write!(f, "gcd(0, 0) is undefined"),
            Error::EvenNorm => write!(f, "modulus must have odd norm"),
            Error::NotPrimary => write!(f, "modulus must be primary"),
            Error::FactorZero => write!(f, "cannot factor zero"),
            Error::FactorBoundExceeded { norm, bound } => {
                write!(f, "norm {norm} exceeds factoring bound {bound}")
            }
            Error::ResidueBoundExceeded { norm, bound } => {
                write!(f, "norm {norm} exceeds residue-system bound {bound}")
            }
            Error::NotPrime => write!(f, "modulus is not prime"),
            Error::ComplexGaussSum { imag } => {
                write!(f, "Gauss sum has imaginary part {imag:e}")
            }
            Error::QuadratureBudget { panels } => {
                write!(f, "quadrature tolerance not reached within {panels} panels")
            }
            Error::ThresholdNotFound { eps } => {
                write!(f, "no decay threshold found for eps = {eps:e}")
            }
            Error::WorkBudgetExceeded { pairs, budget } => write!(
                f,
                "direct evaluation needs {pairs} pairs, budget is {budget}; use the poisson method"
            ),
            Error::Policy(msg) => write!(f, "truncation policy error: {msg}"),
            Error::Domain(msg) => write!(f, "argument out of domain: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
