//! Locating the finite-repetition threshold N_B.
//!
//! Under positive preclusion, once the repetition count n is large enough,
//! every frequency bin except the one(s) straddling the Born weight p falls
//! below the threshold eps and stops existing. This module identifies the
//! Born-closest bins, reports which bins survive a given rule at a given n,
//! and scans n upward to find the smallest n_b from which the
//! only-Born-bins-survive state holds across a whole stability window.
//!
//! The single-survivor state is an asymptotic claim; at finite n it can
//! flicker on and off before settling. The stability window operationalizes
//! "from here on": n_b counts only when the state holds at every
//! n in [n_b, n_b + window]. The scan log exposes any flips instead of
//! hiding them.

use rayon::prelude::*;

use crate::ensemble::{bin_weights, build_ensemble, FrequencyBinning, QubitPreparation};
use crate::error::{Error, Result};
use crate::math::{logsumexp, quantize_distance};
use crate::rules::{survivors, PreclusionRule};

/// Chunk size for the scan loop. Chunks bound how much work the parallel
/// path runs past the answer, and the serial path uses the same chunking so
/// both produce identical results entry for entry.
const SCAN_CHUNK: u64 = 64;

/// The bin indices whose midpoints minimize |midpoint - p|.
///
/// This is the bin containing p — or, when p sits exactly on an interior bin
/// boundary, the two bins flanking that boundary, whose midpoints are
/// equidistant from p. Distances are compared after quantization at 1e-12 so
/// that ties exact in real arithmetic are recognized despite float rounding.
/// Only adjacent bins can tie, so the result has one or two elements.
pub fn born_bins(p: f64, binning: &FrequencyBinning) -> Result<Vec<usize>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange { value: p });
    }
    // The minimizer is within one bin of the bin containing p: any farther
    // midpoint is at least 3/(2m) away while the containing bin's is at most
    // 1/(2m) + rounding. Checking the immediate neighbors is enough.
    let center = binning.bin_of_value(p);
    let lo = center.saturating_sub(1);
    let hi = (center + 1).min(binning.bin_count() - 1);
    let mut best = i64::MAX;
    let mut bins = Vec::with_capacity(2);
    for j in lo..=hi {
        let d = quantize_distance((binning.midpoint(j) - p).abs());
        if d < best {
            best = d;
            bins.clear();
            bins.push(j);
        } else if d == best {
            bins.push(j);
        }
    }
    Ok(bins)
}

/// Which bins survive a rule at one repetition count n.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivorReport {
    pub n: u64,
    /// Bin indices that exist under the rule, ascending.
    pub surviving_bins: Vec<usize>,
    /// Born-closest bin indices (one, or two on an exact midpoint tie).
    pub born_bins: Vec<usize>,
    /// True when the survivors are nonempty and all of them are Born bins:
    /// the single-survivor regime, generalized to the two-bin Born tie.
    pub is_theorem_state: bool,
    /// Log-weight per bin (the binned ensemble behind the verdicts).
    pub bin_log_weights: Vec<f64>,
}

/// Build the n-repetition ensemble, bin it, and apply the rule to each bin.
pub fn survivor_report(
    prep: &QubitPreparation,
    n: u64,
    binning: &FrequencyBinning,
    rule: &PreclusionRule,
) -> Result<SurvivorReport> {
    let born = born_bins(prep.born_probability(), binning)?;
    let ensemble = build_ensemble(prep, n)?;
    let binned = bin_weights(&ensemble, binning);
    let labeled: Vec<(usize, f64)> =
        binned.log_weights().iter().copied().enumerate().collect();
    let surviving = survivors(&labeled, rule)?;
    let is_theorem_state =
        !surviving.is_empty() && surviving.iter().all(|b| born.contains(b));
    Ok(SurvivorReport {
        n,
        surviving_bins: surviving,
        born_bins: born,
        is_theorem_state,
        bin_log_weights: binned.log_weights().to_vec(),
    })
}

/// Counts k (rather than bins) that survive a rule at repetition count n.
///
/// Comparison mode: preclusion applied to raw count branches instead of the
/// coarse-grained frequency bins an observer actually resolves.
pub fn surviving_counts(
    prep: &QubitPreparation,
    n: u64,
    rule: &PreclusionRule,
) -> Result<Vec<u64>> {
    let ensemble = build_ensemble(prep, n)?;
    let labeled: Vec<(u64, f64)> = ensemble
        .log_weights()
        .iter()
        .copied()
        .enumerate()
        .map(|(k, lw)| (k as u64, lw))
        .collect();
    survivors(&labeled, rule)
}

/// One scanned repetition count in a threshold search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanEntry {
    pub n: u64,
    pub survivor_count: usize,
    pub is_theorem_state: bool,
}

/// Result of a threshold scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    /// Smallest n <= n_max with the theorem state holding at every
    /// repetition count in [n_b, n_b + stability_window]; None if the scan
    /// exhausted n_max without finding one.
    pub n_b: Option<u64>,
    pub stability_window: u64,
    pub n_max: u64,
    /// Born-closest bins for this preparation and binning.
    pub born_bins: Vec<usize>,
    /// True when the Born weight sits exactly on a bin boundary, splitting
    /// its mass between two bins. The scan still runs — the theorem state
    /// then means exactly those two bins survive — but a single survivor is
    /// unreachable, which this flag makes visible.
    pub born_on_boundary: bool,
    /// One entry per scanned n, in scan order. The scan stops at
    /// n_b + stability_window when found, at n_max + stability_window
    /// otherwise, so the log covers every n the verdict rests on.
    pub scan_log: Vec<ScanEntry>,
}

/// Scan n = 1, 2, 3, ... for the smallest n_b <= n_max such that the theorem
/// state holds at every n in [n_b, n_b + stability_window].
///
/// The scan is exact and exhaustive: survivor sets are not monotone in n, so
/// no bisection or stride tricks are sound. Every n up to the decision point
/// is evaluated with the same `survivor_report` a caller would use to check
/// the result, so re-evaluating any scanned n reproduces the scan's verdict
/// bit for bit. With `parallel` set, chunks of n are evaluated across
/// threads; results are identical to the serial scan, entry for entry.
///
/// Errors: `RuleNotPositive` for the zero rule (every nonzero-weight bin
/// survives it, so the single-survivor regime is unreachable except in
/// degenerate preparations); `AllPrecludedPersistent` when no scanned n had
/// even one surviving Born bin — the threshold exceeds the Born bins' weight
/// everywhere in reach, so raising n_max alone cannot help.
pub fn find_nb(
    prep: &QubitPreparation,
    binning: &FrequencyBinning,
    rule: &PreclusionRule,
    n_max: u64,
    stability_window: u64,
    parallel: bool,
) -> Result<ThresholdResult> {
    if !rule.is_positive() {
        return Err(Error::RuleNotPositive);
    }
    if n_max == 0 {
        return Err(Error::InvalidCount { what: "scan limit n_max" });
    }
    let born = born_bins(prep.born_probability(), binning)?;
    let needed = stability_window + 1;
    let scan_end = n_max + stability_window;

    let step = |n: u64| -> Result<(ScanEntry, bool)> {
        let report = survivor_report(prep, n, binning, rule)?;
        let any_born_survivor =
            report.surviving_bins.iter().any(|b| born.contains(b));
        Ok((
            ScanEntry {
                n,
                survivor_count: report.surviving_bins.len(),
                is_theorem_state: report.is_theorem_state,
            },
            any_born_survivor,
        ))
    };

    let mut scan_log = Vec::new();
    let mut run = 0u64;
    let mut any_born_survivor = false;
    let mut n_b = None;
    let mut chunk_start = 1u64;
    'scan: while chunk_start <= scan_end {
        let chunk_end = (chunk_start + SCAN_CHUNK - 1).min(scan_end);
        let ns: Vec<u64> = (chunk_start..=chunk_end).collect();
        let steps: Vec<(ScanEntry, bool)> = if parallel {
            ns.into_par_iter().map(step).collect::<Result<Vec<_>>>()?
        } else {
            ns.into_iter().map(step).collect::<Result<Vec<_>>>()?
        };
        for (entry, born_survivor) in steps {
            any_born_survivor |= born_survivor;
            run = if entry.is_theorem_state { run + 1 } else { 0 };
            let n = entry.n;
            scan_log.push(entry);
            if run >= needed {
                // First completed run; any later run starts later, so this
                // start is the minimal n_b, and n <= n_max + window keeps it
                // within the n_max bound automatically.
                n_b = Some(n - stability_window);
                break 'scan;
            }
        }
        chunk_start = chunk_end + 1;
    }

    if n_b.is_none() && !any_born_survivor {
        return Err(Error::AllPrecludedPersistent);
    }
    Ok(ThresholdResult {
        n_b,
        stability_window,
        n_max,
        born_on_boundary: born.len() > 1,
        born_bins: born,
        scan_log,
    })
}

/// Outcome classification for one sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepStatus {
    Found,
    NotFound,
    AllPrecludedPersistent,
    InvalidEps,
}

/// One row of an eps sweep: the threshold found (or the reason none was)
/// for a single eps value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eps: f64,
    pub n_b: Option<u64>,
    pub status: SweepStatus,
    pub born_on_boundary: bool,
}

/// Run `find_nb` once per eps value, keeping rows in the order given.
///
/// Per-row failures (an eps outside (0, 1), or persistent all-preclusion)
/// are recorded in the row's status rather than aborting the sweep;
/// validation errors in the shared arguments still abort.
pub fn sweep_nb(
    prep: &QubitPreparation,
    binning: &FrequencyBinning,
    eps_list: &[f64],
    n_max: u64,
    stability_window: u64,
    parallel: bool,
) -> Result<Vec<SweepRow>> {
    if eps_list.is_empty() {
        return Err(Error::InvalidCount { what: "sweep eps list" });
    }
    let born = born_bins(prep.born_probability(), binning)?;
    let born_on_boundary = born.len() > 1;
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let rule = match PreclusionRule::positive(eps) {
            Ok(rule) => rule,
            Err(_) => {
                rows.push(SweepRow {
                    eps,
                    n_b: None,
                    status: SweepStatus::InvalidEps,
                    born_on_boundary,
                });
                continue;
            }
        };
        match find_nb(prep, binning, &rule, n_max, stability_window, parallel) {
            Ok(result) => rows.push(SweepRow {
                eps,
                n_b: result.n_b,
                status: if result.n_b.is_some() {
                    SweepStatus::Found
                } else {
                    SweepStatus::NotFound
                },
                born_on_boundary,
            }),
            Err(Error::AllPrecludedPersistent) => rows.push(SweepRow {
                eps,
                n_b: None,
                status: SweepStatus::AllPrecludedPersistent,
                born_on_boundary,
            }),
            Err(other) => return Err(other),
        }
    }
    Ok(rows)
}

/// How the weight splits between Born bins and everything else at one n,
/// with the Hoeffding tail bound the off-Born mass must respect.
#[derive(Debug, Clone, PartialEq)]
pub struct BornMassSplit {
    pub born_bins: Vec<usize>,
    /// Combined log-weight of the Born bins.
    pub born_log_mass: f64,
    /// Combined log-weight of every other bin.
    pub off_born_log_mass: f64,
    /// Distance from p to the outer boundary of the Born-bin region: the
    /// frequency deviation needed to escape the Born bins. Zero when p is 0
    /// or 1 (the region touches the interval edge), making the bound vacuous.
    pub delta: f64,
    /// ln(2) - 2 n delta^2: the Hoeffding upper bound on
    /// `off_born_log_mass`, kept in log space because the linear bound
    /// rounds to exactly 1 - 0 = 1 long before it is vacuous.
    pub off_born_log_bound: f64,
}

/// Split the n-repetition binned weight into Born-bin mass and off-Born
/// mass, and compute the Hoeffding bound the off-Born mass must sit under.
///
/// Escaping the Born-bin region means the observed frequency deviated from p
/// by at least `delta`, an event of weight at most 2 exp(-2 n delta^2).
pub fn born_mass_split(
    prep: &QubitPreparation,
    n: u64,
    binning: &FrequencyBinning,
) -> Result<BornMassSplit> {
    let p = prep.born_probability();
    let born = born_bins(p, binning)?;
    let ensemble = build_ensemble(prep, n)?;
    let binned = bin_weights(&ensemble, binning);
    let (mut born_lws, mut off_lws) = (Vec::new(), Vec::new());
    for (j, &lw) in binned.log_weights().iter().enumerate() {
        if born.contains(&j) {
            born_lws.push(lw);
        } else {
            off_lws.push(lw);
        }
    }
    let first = *born.first().expect("born_bins is never empty");
    let last = *born.last().expect("born_bins is never empty");
    let delta = (p - binning.lower_edge(first)).min(binning.upper_edge(last) - p);
    Ok(BornMassSplit {
        born_bins: born,
        born_log_mass: logsumexp(&born_lws),
        off_born_log_mass: logsumexp(&off_lws),
        delta,
        off_born_log_bound: hoeffding_off_born_log_bound(n, delta),
    })
}

/// ln of the Hoeffding two-sided tail bound: ln(2) - 2 n delta^2.
pub fn hoeffding_off_born_log_bound(n: u64, delta: f64) -> f64 {
    std::f64::consts::LN_2 - 2.0 * (n as f64) * delta * delta
}
