use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kappa must be even and >= 2, got {0}")]
    InvalidKappa(u32),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("value {y} outside the T range of well j={j} (kappa={kappa})")]
    BranchRange { kappa: u32, j: u32, y: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("chain construction failed at step {step}: {reason}")]
    ConstructionFailure { step: usize, reason: String },

    #[error("no convergence in {what} after {iterations} iterations")]
    NoConvergence { what: String, iterations: usize },

    #[error("schedule infeasible: {0}")]
    ScheduleInfeasible(String),

    #[error("degenerate factor m(X)U(X) = {value:e} at X_{index}")]
    DegenerateFactor { index: usize, value: f64 },

    #[error("singular linear system")]
    SingularSystem,

    #[error("no closed-form alignment weights for (n, p) = ({n}, {p})")]
    UnsupportedPair { n: usize, p: usize },

    #[error("lifting factor cos(j pi / kappa) vanishes for j={j}")]
    ZeroFactor { j: u32 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("rank deficient system (null space dimension {nullity})")]
    RankDeficient { nullity: usize },

    #[error("no valid index set among {} candidates", .0.len())]
    NoValidSigma(Vec<(Vec<u32>, String)>),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::ConstructionFailure { .. }
                | Error::ScheduleInfeasible(_)
                | Error::DegenerateFactor { .. }
                | Error::SingularSystem
                | Error::RankDeficient { .. }
                | Error::NoValidSigma(_)
        )
    }
}
