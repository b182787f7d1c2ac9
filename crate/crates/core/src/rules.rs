//! Existence rules: zero preclusion and positive preclusion.
//!
//! Zero preclusion declares a branch nonexistent exactly when its weight is
//! zero. Positive preclusion declares it nonexistent when its weight is less
//! than or equal to a small positive threshold eps; the boundary is
//! *inclusive* (a weight equal to eps is precluded). Both rules come in a
//! linear-weight form and a log-weight twin; the log form compares logs
//! directly and therefore keeps working far below the underflow limit of
//! linear doubles.

use crate::error::{Error, Result};
use crate::weights::TOLERANCE;

/// Linear weights below this are representable but so close to the underflow
/// regime that the linear and log paths can no longer be cross-checked; the
/// verdict flags them instead of silently precluding them.
pub const ZERO_FLOOR: f64 = 1e-300;

/// A preclusion rule. The positive form stores the threshold both linearly
/// and as a natural log so each comparison path works in its own domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PreclusionRule {
    /// Only weight-0 branches are precluded.
    Zero,
    /// Branches with weight <= eps are precluded (inclusive boundary).
    Positive {
        /// The threshold as a linear weight. When the rule was supplied as a
        /// log10 value this is exp(ln_eps) and may underflow to 0 for
        /// physically tiny thresholds; the log path remains exact.
        eps: f64,
        /// Natural log of the threshold, the authority for log-domain tests.
        ln_eps: f64,
        /// Whether the rule was configured as log10(eps) rather than eps.
        from_log10: bool,
    },
}

impl PreclusionRule {
    pub fn zero() -> Self {
        PreclusionRule::Zero
    }

    /// Positive preclusion from a linear threshold, 0 < eps < 1.
    pub fn positive(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidEps { value: eps });
        }
        Ok(PreclusionRule::Positive { eps, ln_eps: eps.ln(), from_log10: false })
    }

    /// Positive preclusion from log10(eps). This is the way to express
    /// thresholds like 1e-300 and below without losing them to underflow.
    pub fn positive_log10(log10_eps: f64) -> Result<Self> {
        let strictly_negative = log10_eps.is_finite() && log10_eps < 0.0;
        if !strictly_negative {
            return Err(Error::InvalidEps { value: log10_eps });
        }
        let ln_eps = log10_eps * std::f64::consts::LN_10;
        Ok(PreclusionRule::Positive { eps: ln_eps.exp(), ln_eps, from_log10: true })
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, PreclusionRule::Positive { .. })
    }

    pub fn eps(&self) -> Option<f64> {
        match self {
            PreclusionRule::Zero => None,
            PreclusionRule::Positive { eps, .. } => Some(*eps),
        }
    }

    pub fn ln_eps(&self) -> Option<f64> {
        match self {
            PreclusionRule::Zero => None,
            PreclusionRule::Positive { ln_eps, .. } => Some(*ln_eps),
        }
    }
}

/// The outcome of applying a rule to one branch weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceVerdict {
    /// Whether the branch exists under the rule.
    pub exists: bool,
    /// The weight as a linear double (exp of the log-weight on the log path;
    /// may underflow to 0 for extremely negative log-weights).
    pub weight: f64,
    /// Natural log of the weight; negative infinity for weight zero.
    pub log_weight: f64,
    /// Set when the weight is positive but below `ZERO_FLOOR`: the branch is
    /// indistinguishable from weight zero in linear representation, which is
    /// reported rather than silently treated as zero.
    pub indistinguishable_from_zero: bool,
}

/// Apply a rule to a linear weight in [0, 1].
pub fn exists(weight: f64, rule: &PreclusionRule) -> Result<ExistenceVerdict> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::WeightOutOfRange { value: weight });
    }
    let exists = match rule {
        PreclusionRule::Zero => weight != 0.0,
        PreclusionRule::Positive { eps, .. } => weight > *eps,
    };
    Ok(ExistenceVerdict {
        exists,
        weight,
        log_weight: weight.ln(),
        indistinguishable_from_zero: weight > 0.0 && weight < ZERO_FLOOR,
    })
}

/// Apply a rule to a natural-log weight (<= 0, or negative infinity for an
/// exactly-zero weight). Comparisons happen in log space, so weights far
/// below the linear underflow limit are classified correctly.
///
/// Log-weights up to +1e-12 are accepted and clamped to 0: log-sum-exp over a
/// complete branch set can legitimately land a hair above zero.
pub fn exists_log(log_weight: f64, rule: &PreclusionRule) -> Result<ExistenceVerdict> {
    if log_weight.is_nan() || log_weight > TOLERANCE {
        return Err(Error::LogWeightPositive { value: log_weight });
    }
    let lw = log_weight.min(0.0);
    let exists = match rule {
        PreclusionRule::Zero => lw != f64::NEG_INFINITY,
        PreclusionRule::Positive { ln_eps, .. } => lw > *ln_eps,
    };
    Ok(ExistenceVerdict {
        exists,
        weight: lw.exp().min(1.0),
        log_weight: lw,
        indistinguishable_from_zero: lw != f64::NEG_INFINITY && lw < ZERO_FLOOR.ln(),
    })
}

/// Filter a labeled set of log-weights down to the labels that exist under
/// the rule, preserving input order.
pub fn survivors<L: Clone>(
    labeled_log_weights: &[(L, f64)],
    rule: &PreclusionRule,
) -> Result<Vec<L>> {
    let mut out = Vec::new();
    for (label, lw) in labeled_log_weights {
        if exists_log(*lw, rule)?.exists {
            out.push(label.clone());
        }
    }
    Ok(out)
}
