//! Error type shared by every module in the crate.
//!
//! Construction-time validation failures (bad amplitudes, malformed
//! projectors, out-of-range parameters) are kept distinct from
//! computation-level outcomes (everything precluded), because front ends map
//! the two groups to different exit codes.

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("state vector must have dimension >= 1")]
    ZeroDimension,

    #[error("vector is not normalized: |sum of squared magnitudes - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not a projector: {reason}")]
    NotAProjector { reason: String },

    #[error("matrix is not unitary: max |U*U - I| entry = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("weight has a non-negligible imaginary part: {imaginary:.3e}")]
    NonRealWeight { imaginary: f64 },

    #[error("weight {value} lies outside [0, 1]")]
    WeightOutOfRange { value: f64 },

    #[error("log-weight {value} is positive (weights never exceed 1)")]
    LogWeightPositive { value: f64 },

    #[error("probability {value} lies outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },

    #[error("count k = {k} out of range for n = {n} repetitions")]
    KOutOfRange { k: u64, n: u64 },

    #[error("{what} must be at least 1")]
    InvalidCount { what: &'static str },

    #[error("n = {n} is too large for exhaustive sequence enumeration (max {max})")]
    NTooLargeForOracle { n: u64, max: u64 },

    #[error("bin count must lie in 1..={max}, got {m}")]
    InvalidBinCount { m: u64, max: u64 },

    #[error("preclusion threshold must satisfy 0 < eps < 1, got {value}")]
    InvalidEps { value: f64 },

    #[error("threshold search requires a positive preclusion rule")]
    RuleNotPositive,

    #[error("tolerance must satisfy 0 < tau <= 1, got {value}")]
    InvalidTolerance { value: f64 },

    #[error("every branch is precluded under the active rule")]
    AllPrecluded,

    #[error("no Born bin ever exceeds the preclusion threshold within the scanned range")]
    AllPrecludedPersistent,
}

impl Error {
    /// True for outcomes of a well-posed computation (as opposed to rejected
    /// inputs). Front ends report these with a different exit code.
    pub fn is_computational(&self) -> bool {
        matches!(self, Error::AllPrecluded | Error::AllPrecludedPersistent)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
