//! Branch weights, preclusion rules, and finite-N relative-frequency
//! thresholds for repeated two-state measurements.
//!
//! In a no-collapse (many-worlds) reading of quantum mechanics, a repeated
//! measurement splits the state into branches, and each branch carries a
//! weight W = <psi|P|psi> — the squared-amplitude quantity that plays the
//! numerical role probability plays elsewhere. This crate computes those
//! weights exactly and applies *existence rules* to them:
//!
//! - **zero preclusion** — a branch exists unless its weight is exactly 0;
//! - **positive preclusion** — a branch exists only if its weight exceeds a
//!   small threshold eps (weights <= eps are gone, boundary inclusive).
//!
//! The payoff of the positive rule is quantitative: bin the observed
//! relative frequency of n repeated two-state measurements into m equal
//! bins, and for n beyond a finite threshold n_b every bin except the
//! one(s) straddling the Born weight p falls below eps and stops existing.
//! [`find_nb`] locates that threshold by exact scan; [`born_mass_split`]
//! checks the mass concentration against a Hoeffding bound;
//! [`train_device`], [`predict_surprise`], and [`run_lineages`] build the
//! learning-and-selection picture on top: surviving observers have learned
//! the Born weight, and lineages expecting anything else are selected away.
//!
//! Everything is deterministic — exact enumeration and log-space
//! arithmetic, no sampling. The `preclusion` binary exposes each piece as a
//! subcommand emitting byte-reproducible CSV/JSON.
//!
//! # Example
//!
//! ```
//! use preclusion::{
//!     find_nb, FrequencyBinning, PreclusionRule, QubitPreparation,
//! };
//!
//! let prep = QubitPreparation::from_born_probability(0.5)?;
//! let bins = FrequencyBinning::new(5)?;
//! let rule = PreclusionRule::positive(1e-3)?;
//! let found = find_nb(&prep, &bins, &rule, 1000, 32, false)?;
//! // From 246 repetitions on, only the bin containing 0.5 exists.
//! assert_eq!(found.n_b, Some(246));
//! # Ok::<(), preclusion::Error>(())
//! ```

// The matrix and complex types appearing in this crate's public API, so
// downstream crates can name them without pinning matching versions.
pub use ndarray;
pub use num_complex;
pub use num_complex::Complex64;

pub mod ensemble;
pub mod error;
pub mod learning;
pub mod math;
pub mod output;
pub mod rules;
pub mod threshold;
pub mod weights;

pub use ensemble::{
    bin_weights, branch_log_weight, build_ensemble, enumerate_sequences_oracle,
    BinnedEnsemble, BranchEnsemble, FrequencyBinning, QubitPreparation, MAX_BINS,
    ORACLE_MAX_N,
};
pub use error::{Error, Result};
pub use learning::{
    predict_surprise, run_lineages, train_device, Lineage, LineageOutcome,
    SurpriseDistribution, SurpriseEntry, TrainedDevice,
};
pub use math::{ln_binomial, logsumexp};
pub use rules::{
    exists, exists_log, survivors, ExistenceVerdict, PreclusionRule, ZERO_FLOOR,
};
pub use threshold::{
    born_bins, born_mass_split, find_nb, hoeffding_off_born_log_bound, surviving_counts,
    survivor_report, sweep_nb, BornMassSplit, ScanEntry, SurvivorReport, SweepRow,
    SweepStatus, ThresholdResult,
};
pub use weights::{
    heisenberg_weight, is_post_measurement_eigenstate, weight, Projector, StateVector,
    UnitaryMatrix, TOLERANCE,
};
