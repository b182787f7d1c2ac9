//! Log-domain numeric kernels used throughout the crate.

use statrs::function::gamma::ln_gamma;

/// ln(i!): exact-integer route for small i, log-gamma beyond.
///
/// Up to 20! the factorial fits a u64, so taking ln of the exact integer is
/// accurate to about an ulp — log-gamma implementations carry a few more
/// ulps of error, which matters in the tightest small-n comparisons.
#[inline]
pub(crate) fn ln_factorial(i: u64) -> f64 {
    if i <= 20 {
        let mut f: u64 = 1;
        for j in 2..=i {
            f *= j;
        }
        (f as f64).ln()
    } else {
        ln_gamma(i as f64 + 1.0)
    }
}

/// Natural log of the binomial coefficient C(n, k).
///
/// Always goes through log-gamma, never through integer factorials, so it
/// stays finite and accurate far beyond the range where n! overflows.
/// The two subtracted terms are added first; that keeps the expression
/// bit-for-bit symmetric under k <-> n - k.
#[inline]
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - (ln_factorial(k) + ln_factorial(n - k))
}

/// Numerically stable ln(sum of exp(x_i)).
///
/// Returns negative infinity for an empty slice or when every entry is
/// negative infinity, matching the convention that an empty branch set
/// carries zero weight.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Quantize a non-negative distance to integer multiples of 1e-12.
///
/// Distances that are equal in exact arithmetic can differ by a few ulps in
/// floating point (0.5 - 0.45 vs 0.55 - 0.5, say). Comparing the quantized
/// values recognizes those ties without ever confusing genuinely distinct
/// bin distances, whose spacing is far coarser than 1e-12.
#[inline]
pub(crate) fn quantize_distance(d: f64) -> i64 {
    debug_assert!((0.0..=2.0).contains(&d));
    (d * 1e12).round() as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_binomial_small_values() {
        // C(4,2) = 6, C(10,5) = 252, C(16,8) = 12870
        assert!((ln_binomial(4, 2) - 6.0f64.ln()).abs() < 1e-13);
        assert!((ln_binomial(10, 5) - 252.0f64.ln()).abs() < 1e-13);
        assert!((ln_binomial(16, 8) - 12870.0f64.ln()).abs() < 1e-12);
        assert_eq!(ln_binomial(7, 0), 0.0);
        assert_eq!(ln_binomial(7, 7), 0.0);
    }

    #[test]
    fn ln_binomial_symmetric_bitwise() {
        for n in [5u64, 17, 100, 1001] {
            for k in 0..=n {
                assert_eq!(ln_binomial(n, k).to_bits(), ln_binomial(n, n - k).to_bits());
            }
        }
    }

    #[test]
    fn ln_binomial_large_n_stays_finite() {
        let v = ln_binomial(1_000_000, 500_000);
        assert!(v.is_finite());
        // Stirling: ln C(2m, m) ~ 2m ln 2 - 0.5 ln(pi m)
        let stirling = 1_000_000.0 * std::f64::consts::LN_2
            - 0.5 * (std::f64::consts::PI * 500_000.0).ln();
        assert!((v - stirling).abs() < 1e-6);
    }

    #[test]
    fn logsumexp_matches_direct_sum() {
        let xs = [0.2f64, 0.5, 0.1].map(f64::ln);
        assert!((logsumexp(&xs) - 0.8f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn logsumexp_handles_extreme_shifts() {
        // exp(-1000) + exp(-1001) would underflow; the log-domain sum must not.
        let xs = [-1000.0, -1001.0];
        let expected = -1000.0 + (1.0 + (-1.0f64).exp()).ln();
        assert!((logsumexp(&xs) - expected).abs() < 1e-13);
    }

    #[test]
    fn logsumexp_empty_and_all_negative_infinity() {
        assert_eq!(logsumexp(&[]), f64::NEG_INFINITY);
        assert_eq!(logsumexp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
        // A single finite entry dominates any number of -inf entries.
        assert_eq!(logsumexp(&[f64::NEG_INFINITY, -2.5, f64::NEG_INFINITY]), -2.5);
    }

    #[test]
    fn quantized_distances_recognize_exact_ties() {
        // 0.5 is equidistant from the midpoints 0.45 and 0.55 in exact
        // arithmetic, but the float distances differ by a few ulps.
        let lo = (0.45f64 - 0.5).abs();
        let hi = (0.55f64 - 0.5).abs();
        assert_ne!(lo.to_bits(), hi.to_bits());
        assert_eq!(quantize_distance(lo), quantize_distance(hi));
        // Distinct distances stay distinct.
        assert_ne!(quantize_distance(0.05), quantize_distance(0.15));
    }
}
