//! Branch ensembles for n repeated two-state measurements.
//!
//! Measuring the same two-state preparation n times splits the wavefunction
//! into 2^n outcome sequences. All sequences sharing a count k of "1"
//! outcomes carry identical weight, so they coalesce into n + 1 branches with
//! weight C(n, k) p^k (1-p)^(n-k). Everything is kept in natural-log form;
//! linear weights underflow long before n reaches the region of interest.
//!
//! A finite-precision observer does not resolve individual frequencies k/n;
//! `FrequencyBinning` coarse-grains them into m equal-width bins and
//! `bin_weights` coalesces branch weights per bin.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{ln_binomial, logsumexp, quantize_distance};
use crate::weights::{StateVector, TOLERANCE};

/// Largest n accepted by the exhaustive sequence-enumeration oracle.
pub const ORACLE_MAX_N: u64 = 20;

/// Largest accepted bin count. Beyond this, midpoint spacing approaches the
/// 1e-12 tie-quantization scale and bins stop being distinguishable.
pub const MAX_BINS: u64 = 1_000_000_000;

/// A two-state preparation c1|1> + c2|2>, normalized within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitPreparation {
    c1: Complex64,
    c2: Complex64,
    p: f64,
}

impl QubitPreparation {
    /// From explicit amplitudes; the Born weight p = |c1|^2 is cached.
    pub fn new(c1: Complex64, c2: Complex64) -> Result<Self> {
        let norm_sq = c1.norm_sqr() + c2.norm_sqr();
        let deviation = (norm_sq - 1.0).abs();
        if deviation > TOLERANCE {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { c1, c2, p: c1.norm_sqr().clamp(0.0, 1.0) })
    }

    /// From the Born weight alone, with real non-negative amplitudes
    /// (sqrt(p), sqrt(1-p)). The given p is stored exactly, so downstream
    /// arithmetic sees p itself rather than a sqrt round trip.
    pub fn from_born_probability(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange { value: p });
        }
        Ok(Self {
            c1: Complex64::new(p.sqrt(), 0.0),
            c2: Complex64::new((1.0 - p).sqrt(), 0.0),
            p,
        })
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn c2(&self) -> Complex64 {
        self.c2
    }

    /// The weight of outcome "1" in a single measurement: p = |c1|^2.
    pub fn born_probability(&self) -> f64 {
        self.p
    }

    /// The preparation as a 2-dimensional state vector (outcome-1 amplitude
    /// first), for use with the projector formalism.
    pub fn state_vector(&self) -> StateVector {
        StateVector::new(vec![self.c1, self.c2]).expect("preparation is normalized")
    }
}

/// ln(1 - p) without cancellation.
///
/// The branch below 0.5 keeps 1 - p exact at p = 0.5, which in turn keeps
/// the k <-> n - k weight symmetry at p = 0.5 exact to the bit; the ln_1p
/// branch above 0.5 avoids the precision loss of forming 1 - p there.
#[inline]
fn ln_one_minus(p: f64) -> f64 {
    if p <= 0.5 {
        (1.0 - p).ln()
    } else {
        (-p).ln_1p()
    }
}

/// Core branch-weight kernel; callers have validated n, k, p.
#[inline]
fn log_weight_unchecked(n: u64, k: u64, p: f64) -> f64 {
    // Degenerate preparations first: 0^0 terms must come out as a certain
    // outcome (log-weight 0), not NaN.
    if p == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if p == 1.0 {
        return if k == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let ln_p = p.ln();
    let ln_q = ln_one_minus(p);
    ln_binomial(n, k) + ((k as f64) * ln_p + ((n - k) as f64) * ln_q)
}

/// Natural-log weight of the k-count branch after n repetitions:
/// ln[ C(n,k) p^k (1-p)^(n-k) ], computed via log-gamma.
///
/// For the degenerate preparations p = 0 and p = 1 the impossible branches
/// report negative infinity and the certain branch reports exactly 0.
pub fn branch_log_weight(n: u64, k: u64, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidCount { what: "repetition count n" });
    }
    if k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange { value: p });
    }
    Ok(log_weight_unchecked(n, k, p))
}

/// The coalesced branch ensemble after n repetitions: one log-weight per
/// count k in 0..=n.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchEnsemble {
    n: u64,
    p: f64,
    log_weights: Vec<f64>,
}

impl BranchEnsemble {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn log_weight(&self, k: u64) -> Result<f64> {
        if k > self.n {
            return Err(Error::KOutOfRange { k, n: self.n });
        }
        Ok(self.log_weights[k as usize])
    }

    /// Observed relative frequency of the k-th branch.
    pub fn frequency(&self, k: u64) -> f64 {
        k as f64 / self.n as f64
    }
}

/// Build the full coalesced ensemble for n repetitions of `prep`.
///
/// Total weight is conserved: the log-sum-exp over all branches is asserted
/// to be 0 within 1e-10.
pub fn build_ensemble(prep: &QubitPreparation, n: u64) -> Result<BranchEnsemble> {
    if n == 0 {
        return Err(Error::InvalidCount { what: "repetition count n" });
    }
    let p = prep.p;
    let mut log_weights = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        log_weights.push(log_weight_unchecked(n, k, p));
    }
    let total = logsumexp(&log_weights);
    assert!(
        total.abs() <= 1e-10,
        "branch weight conservation violated: logsumexp = {total:e} for n = {n}, p = {p}"
    );
    Ok(BranchEnsemble { n, p, log_weights })
}

/// Exhaustive 2^n oracle: enumerate every outcome sequence, multiply
/// per-outcome weights, and accumulate linear totals per count k.
///
/// This is the independent cross-check for `build_ensemble` and is
/// deliberately written in linear arithmetic with no binomial coefficients.
/// It refuses n > `ORACLE_MAX_N`.
pub fn enumerate_sequences_oracle(prep: &QubitPreparation, n: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidCount { what: "repetition count n" });
    }
    if n > ORACLE_MAX_N {
        return Err(Error::NTooLargeForOracle { n, max: ORACLE_MAX_N });
    }
    let p = prep.p;
    let q = 1.0 - p;
    let mut totals = vec![0.0f64; n as usize + 1];
    for mask in 0u64..(1u64 << n) {
        let mut sequence_weight = 1.0f64;
        for bit in 0..n {
            sequence_weight *= if (mask >> bit) & 1 == 1 { p } else { q };
        }
        totals[mask.count_ones() as usize] += sequence_weight;
    }
    Ok(totals)
}

/// m equal-width frequency bins over [0, 1].
///
/// Bin j covers [j/m, (j+1)/m); the last bin also includes 1. A frequency
/// exactly on a boundary therefore belongs to the higher bin. Count-based
/// lookups run in integer arithmetic, so boundary membership is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyBinning {
    m: u64,
}

impl FrequencyBinning {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 || m > MAX_BINS {
            return Err(Error::InvalidBinCount { m, max: MAX_BINS });
        }
        Ok(Self { m })
    }

    pub fn bin_count(&self) -> usize {
        self.m as usize
    }

    /// Bin of the frequency k/n, decided exactly: j = floor(k m / n) in
    /// integer arithmetic, clamped so that k = n lands in the last bin.
    pub fn bin_of_count(&self, k: u64, n: u64) -> usize {
        debug_assert!(n > 0 && k <= n);
        let j = ((k as u128 * self.m as u128) / n as u128) as u64;
        if j >= self.m { (self.m - 1) as usize } else { j as usize }
    }

    /// Bin containing an arbitrary value in [0, 1]. Floating-point lookup;
    /// values within representation noise of a boundary follow the float.
    pub fn bin_of_value(&self, x: f64) -> usize {
        debug_assert!((0.0..=1.0).contains(&x));
        let j = (x * self.m as f64).floor() as i64;
        j.clamp(0, self.m as i64 - 1) as usize
    }

    /// The representative value reported for bin j: its midpoint.
    pub fn midpoint(&self, j: usize) -> f64 {
        debug_assert!(j < self.m as usize);
        (j as f64 + 0.5) / self.m as f64
    }

    pub fn lower_edge(&self, j: usize) -> f64 {
        j as f64 / self.m as f64
    }

    pub fn upper_edge(&self, j: usize) -> f64 {
        (j as f64 + 1.0) / self.m as f64
    }

    /// The interior boundary index b (bin b's lower edge) that `x` sits on
    /// exactly, up to 1e-12 quantization; None when x is strictly inside a
    /// bin or at the outer edges 0 and 1.
    pub fn boundary_at(&self, x: f64) -> Option<usize> {
        let b = (x * self.m as f64).round();
        if b < 1.0 || b > (self.m - 1) as f64 {
            return None;
        }
        let edge = b / self.m as f64;
        if quantize_distance((x - edge).abs()) == 0 { Some(b as usize) } else { None }
    }
}

/// Branch weights coalesced per frequency bin.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedEnsemble {
    n: u64,
    p: f64,
    binning: FrequencyBinning,
    log_weights: Vec<f64>,
}

impl BinnedEnsemble {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn binning(&self) -> &FrequencyBinning {
        &self.binning
    }

    /// One log-weight per bin; empty bins carry negative infinity.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }
}

/// Coalesce an ensemble's branch weights into frequency bins by log-sum-exp.
///
/// Every count maps to exactly one bin, so total weight is conserved; this is
/// asserted within 1e-10. Empty bins report negative infinity.
pub fn bin_weights(ensemble: &BranchEnsemble, binning: &FrequencyBinning) -> BinnedEnsemble {
    let m = binning.bin_count();
    let n = ensemble.n;
    let lw = ensemble.log_weights();
    let mut per_bin = vec![f64::NEG_INFINITY; m];
    // bin_of_count is nondecreasing in k, so each bin's members form one
    // contiguous run of counts; sum run by run.
    let mut run_start = 0usize;
    while run_start <= n as usize {
        let bin = binning.bin_of_count(run_start as u64, n);
        let mut run_end = run_start + 1;
        while run_end <= n as usize && binning.bin_of_count(run_end as u64, n) == bin {
            run_end += 1;
        }
        per_bin[bin] = logsumexp(&lw[run_start..run_end]);
        run_start = run_end;
    }
    let total = logsumexp(&per_bin);
    assert!(
        total.abs() <= 1e-10,
        "bin weight conservation violated: logsumexp = {total:e} for n = {n}, m = {m}"
    );
    BinnedEnsemble { n, p: ensemble.p, binning: *binning, log_weights: per_bin }
}
