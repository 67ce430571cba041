//! Shared conventions used by the engine and by the brute-force oracles.
//!
//! Every exclusion-zone, zero-variance and tie-breaking decision goes through
//! this module so that oracle comparisons are exact rather than fuzzy.

use std::cmp::Ordering;

/// Relative threshold under which a window's standard deviation counts as zero.
pub const ZERO_VARIANCE_RELATIVE: f64 = 1e-13;

/// Half-width of the exclusion zone: `|i - j| < exclusion_radius(len)` is a trivial match.
#[inline]
pub fn exclusion_radius(len: usize) -> usize {
    len.div_ceil(2)
}

/// True when windows at `i` and `j` of length `len` are trivial matches (including `i == j`).
#[inline]
pub fn is_trivial_match(i: usize, j: usize, len: usize) -> bool {
    i.abs_diff(j) < exclusion_radius(len)
}

/// Absolute standard-deviation threshold for a series whose largest magnitude is `max_abs`.
#[inline]
pub fn zero_variance_threshold(max_abs: f64) -> f64 {
    let scale = if max_abs > 0.0 { max_abs } else { 1.0 };
    ZERO_VARIANCE_RELATIVE * scale
}

/// Orders `(distance, offset)` candidates: smaller distance first, then smaller offset.
#[inline]
pub fn cmp_candidates(a: (f64, usize), b: (f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Number of length-`len` windows in a series of `n` points.
#[inline]
pub fn window_count(n: usize, len: usize) -> usize {
    if len == 0 || len > n {
        0
    } else {
        n - len + 1
    }
}

/// Maximum number of non-valid profiles that may be recomputed one by one
/// before a full matrix-profile recomputation becomes cheaper: `n log(p) / log(n)`.
pub fn recompute_threshold(n: usize, p: usize) -> f64 {
    if n < 2 || p < 2 {
        return 0.0;
    }
    let n = n as f64;
    n * (p as f64).ln() / n.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exclusion_uses_ceiling() {
        assert_eq!(exclusion_radius(8), 4);
        assert_eq!(exclusion_radius(9), 5);
        assert!(is_trivial_match(10, 14, 9));
        assert!(!is_trivial_match(10, 15, 9));
        assert!(is_trivial_match(3, 3, 1));
    }

    #[test]
    fn candidate_order_breaks_ties_by_offset() {
        assert_eq!(cmp_candidates((1.0, 4), (1.0, 2)), Ordering::Greater);
        assert_eq!(cmp_candidates((0.5, 9), (1.0, 2)), Ordering::Less);
    }

    #[test]
    fn threshold_vanishes_for_tiny_capacity() {
        assert_eq!(recompute_threshold(1000, 1), 0.0);
        let t = recompute_threshold(100_000, 50);
        assert!((t - 100_000.0 * 50f64.ln() / 100_000f64.ln()).abs() < 1e-9);
    }
}
