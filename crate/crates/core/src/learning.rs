//! Learning devices and lineage selection under preclusion.
//!
//! A relative-frequency device trained on n repetitions "learns" the
//! midpoint of whichever frequency bin it finds itself in — and under
//! positive preclusion at large n, only the Born-closest bin's copy of the
//! device still exists, so what it learned is the Born weight at bin
//! resolution. `predict_surprise` then quantifies how surprised a device
//! holding expectation p_hat will be by a follow-up run of n' measurements.
//!
//! The lineage model extends this across generations: a lineage holds a
//! fixed expectation p_hat, each generation observes a fresh batch of n_g
//! measurements, and the lineage's "expectations met" event is the set of
//! outcomes within tolerance tau of p_hat. Its cumulative weight is the
//! product of per-generation event weights — deterministic branch-mass
//! bookkeeping, not sampling — and a lineage is selected out when that
//! cumulative weight falls to the preclusion threshold. Lineages expecting
//! frequencies far from the Born weight die out generations before lineages
//! expecting the Born value.

use crate::ensemble::{build_ensemble, FrequencyBinning, QubitPreparation};
use crate::error::{Error, Result};
use crate::math::logsumexp;
use crate::rules::{exists_log, PreclusionRule};
use crate::threshold::survivor_report;

/// One surviving copy of a trained relative-frequency device.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedDevice {
    /// What this copy learned: the midpoint of its frequency bin.
    pub p_hat: f64,
    /// The bin this copy landed in.
    pub bin_index: usize,
    /// How many repetitions the device was trained on.
    pub n_train: u64,
    /// All bins with surviving copies (shared across the batch of devices
    /// this copy came from); singleton once n_train passes the threshold.
    pub surviving_copies: Vec<usize>,
}

/// Train a device on n_train repetitions: one surviving copy per bin that
/// survives the rule, each having learned its own bin midpoint.
///
/// Errors with `AllPrecluded` when no bin survives — there is no copy left
/// to report, and fabricating one would misstate the model.
pub fn train_device(
    prep: &QubitPreparation,
    n_train: u64,
    binning: &FrequencyBinning,
    rule: &PreclusionRule,
) -> Result<Vec<TrainedDevice>> {
    let report = survivor_report(prep, n_train, binning, rule)?;
    if report.surviving_bins.is_empty() {
        return Err(Error::AllPrecluded);
    }
    Ok(report
        .surviving_bins
        .iter()
        .map(|&bin_index| TrainedDevice {
            p_hat: binning.midpoint(bin_index),
            bin_index,
            n_train,
            surviving_copies: report.surviving_bins.clone(),
        })
        .collect())
}

/// One surviving branch of a follow-up experiment, with the device's
/// surprise at it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurpriseEntry {
    /// Count of "1" outcomes in the follow-up run.
    pub k: u64,
    /// Observed relative frequency k/n'.
    pub observed_frequency: f64,
    /// Log-weight of this branch.
    pub log_weight: f64,
    /// |observed_frequency - p_hat|: distance from the expectation.
    pub surprise: f64,
}

/// The distribution of surprise over the surviving branches of a follow-up
/// experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SurpriseDistribution {
    pub n_prime: u64,
    pub p_hat: f64,
    /// Surviving branches in ascending k order.
    pub entries: Vec<SurpriseEntry>,
    /// Sum of weight * surprise over surviving branches, with the weights
    /// as they are — not renormalized over the survivors.
    pub weighted_mean_surprise: f64,
    /// Combined log-weight of the surviving branches.
    pub surviving_log_mass: f64,
    /// Combined log-weight of the precluded branches (negative infinity
    /// when nothing was precluded). Together with the surviving mass this
    /// accounts for all weight: the discarded mass is reported, not hidden.
    pub precluded_log_mass: f64,
}

/// Run an n'-repetition follow-up experiment against a device expectation
/// p_hat: every branch surviving the rule contributes its frequency's
/// distance from p_hat, weighted by the branch weight.
pub fn predict_surprise(
    p_hat: f64,
    prep: &QubitPreparation,
    n_prime: u64,
    rule: &PreclusionRule,
) -> Result<SurpriseDistribution> {
    if !(0.0..=1.0).contains(&p_hat) {
        return Err(Error::ProbabilityOutOfRange { value: p_hat });
    }
    if n_prime == 0 {
        return Err(Error::InvalidCount { what: "follow-up count n_prime" });
    }
    let ensemble = build_ensemble(prep, n_prime)?;
    let mut entries = Vec::new();
    let mut surviving = Vec::new();
    let mut precluded = Vec::new();
    let mut weighted_mean_surprise = 0.0;
    for (k, &lw) in ensemble.log_weights().iter().enumerate() {
        let k = k as u64;
        if exists_log(lw, rule)?.exists {
            let observed_frequency = k as f64 / n_prime as f64;
            let surprise = (observed_frequency - p_hat).abs();
            weighted_mean_surprise += lw.exp() * surprise;
            surviving.push(lw);
            entries.push(SurpriseEntry { k, observed_frequency, log_weight: lw, surprise });
        } else {
            precluded.push(lw);
        }
    }
    let surviving_log_mass = logsumexp(&surviving);
    let precluded_log_mass = logsumexp(&precluded);
    let total = logsumexp(&[surviving_log_mass, precluded_log_mass]);
    assert!(
        total.abs() <= 1e-10,
        "surviving plus precluded mass must account for all weight: logsumexp = {total:e}"
    );
    Ok(SurpriseDistribution {
        n_prime,
        p_hat,
        entries,
        weighted_mean_surprise,
        surviving_log_mass,
        precluded_log_mass,
    })
}

/// A lineage: a fixed subjective expectation p_hat, tested each generation
/// against a fresh batch of n_g measurements with tolerance tau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lineage {
    p_hat: f64,
    tolerance: f64,
    batch_size: u64,
}

impl Lineage {
    /// Requires p_hat in [0, 1], 0 < tau <= 1 (tau = 1 is the full-interval
    /// tolerance: expectations trivially always met), and n_g >= 1.
    pub fn new(p_hat: f64, tolerance: f64, batch_size: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_hat) {
            return Err(Error::ProbabilityOutOfRange { value: p_hat });
        }
        if !(tolerance > 0.0 && tolerance <= 1.0) {
            return Err(Error::InvalidTolerance { value: tolerance });
        }
        if batch_size == 0 {
            return Err(Error::InvalidCount { what: "generation batch size n_g" });
        }
        Ok(Self { p_hat, tolerance, batch_size })
    }

    pub fn p_hat(&self) -> f64 {
        self.p_hat
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn batch_size(&self) -> u64 {
        self.batch_size
    }
}

/// The fate of one lineage over a fixed number of generations.
#[derive(Debug, Clone, PartialEq)]
pub struct LineageOutcome {
    pub lineage: Lineage,
    /// The counts m with |m/n_g - p_hat| <= tau: the "expectations met"
    /// event, identical every generation.
    pub expectation_met_counts: Vec<u64>,
    /// Log-weight of that event for one generation (zero or negative;
    /// negative infinity when the event is empty or weightless).
    pub per_generation_log_mass: f64,
    /// First generation (1-based) at which the cumulative weight no longer
    /// exists under the rule; None if the lineage survived every generation.
    pub generation_precluded: Option<u64>,
    /// Cumulative log-weight after each generation 1..=G. Exactly linear:
    /// trace[g-1] = g * per_generation_log_mass, since the same event
    /// repeats each generation.
    pub log_weight_trace: Vec<f64>,
}

/// Evolve each lineage for `generations` generations and record where the
/// rule cuts each one off.
///
/// Deterministic bookkeeping: a lineage's cumulative weight is a product of
/// identical per-generation event weights, computed in log space; no
/// sampling anywhere. The trace always covers all generations — preclusion
/// marks where existence ends but the arithmetic continues, so the traces
/// of surviving and precluded lineages stay comparable.
pub fn run_lineages(
    prep: &QubitPreparation,
    lineages: &[Lineage],
    generations: u64,
    rule: &PreclusionRule,
) -> Result<Vec<LineageOutcome>> {
    if generations == 0 {
        return Err(Error::InvalidCount { what: "generation count" });
    }
    let mut outcomes = Vec::with_capacity(lineages.len());
    for lineage in lineages {
        let n_g = lineage.batch_size;
        let ensemble = build_ensemble(prep, n_g)?;
        let mut expectation_met_counts = Vec::new();
        let mut event_lws = Vec::new();
        for m in 0..=n_g {
            if (m as f64 / n_g as f64 - lineage.p_hat).abs() <= lineage.tolerance {
                expectation_met_counts.push(m);
                event_lws.push(ensemble.log_weight(m)?);
            }
        }
        // An event covering every outcome has weight exactly 1 by
        // conservation; computing it would only pick up summation roundoff
        // (a few 1e-16 on either side of 0). Partial events keep their
        // computed mass, clamped against upward drift.
        let per_generation_log_mass = if expectation_met_counts.len() as u64 == n_g + 1 {
            0.0
        } else {
            logsumexp(&event_lws).min(0.0)
        };
        let mut generation_precluded = None;
        let mut log_weight_trace = Vec::with_capacity(generations as usize);
        for g in 1..=generations {
            let cumulative = g as f64 * per_generation_log_mass;
            log_weight_trace.push(cumulative);
            if generation_precluded.is_none() && !exists_log(cumulative, rule)?.exists {
                generation_precluded = Some(g);
            }
        }
        outcomes.push(LineageOutcome {
            lineage: *lineage,
            expectation_met_counts,
            per_generation_log_mass,
            generation_precluded,
            log_weight_trace,
        });
    }
    Ok(outcomes)
}
