//! Crate-wide error type. Variants mirror the failure modes of each layer;
//! the CLI maps them onto exit codes (validation vs numeric failure).

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    // recurrence construction
    #[error("no dominant root: two characteristic roots share the maximal modulus")]
    NoDominantRoot,
    #[error("sequence is not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("first term must be 1, got {0}")]
    FirstTermNotOne(String),
    #[error("characteristic polynomial is reducible over the rationals: {0}")]
    ReducibleCharPoly(String),
    #[error("recurrence needs degree >= 2 and matching coefficient/initial lengths")]
    BadRecurrenceShape,

    // counting
    #[error("count table of size {requested} exceeds the memory budget ({budget} bytes)")]
    CapacityExceeded { requested: u64, budget: u64 },
    #[error("brute-force oracle limited to n <= {limit}, got {n}")]
    OracleTooLarge { n: u64, limit: u64 },
    #[error("log of zero count")]
    LogOfZero,

    // special functions
    #[error("gamma pole at non-positive integer {0}")]
    PoleAtNonpositiveInteger(i64),
    #[error("zeta pole at z = 1")]
    PoleAtOne,
    #[error("Lambert W restricted to the principal branch on x >= 0, got {0}")]
    NegativeArgument(f64),
    #[error("asymptotic form needs x > e, got {0}")]
    TooSmall(f64),

    // recurrence zeta
    #[error("direct Dirichlet series needs Re z >= 0.05, got {0}")]
    AbscissaViolation(f64),
    #[error("evaluation point within {radius} of the pole at {location}")]
    NearPole { location: String, radius: f64 },

    // saddle layer
    #[error("failed to bracket the saddle equation root for n = {0}")]
    BracketFailure(f64),
    #[error("periodic table failed to stabilize by depth m = {0}")]
    NoConvergence(u32),

    // plumbing
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("recurrence file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code classification used by the CLI: 2 for validation errors,
    /// 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BracketFailure(_) | Error::NoConvergence(_) => 3,
            _ => 2,
        }
    }
}
