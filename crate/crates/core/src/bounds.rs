//! Lower bound on the z-normalized distance of two windows after extending
//! them by `k` points, knowing only the length-`len` windows and the extended
//! statistics of one of them (the profile owner).
//!
//! For correlation `q` of the base windows the bound is
//! `sqrt(len * (1 - q²)) * sigma_base / sigma_target` when `q > 0` and
//! `sqrt(len) * sigma_base / sigma_target` otherwise. Only the owner's target
//! deviation depends on `k`, so bounds in one profile share a common scaling
//! factor and keep their order as `k` grows.

use crate::error::{Error, Result};
use crate::policy;
use crate::profile::ProfileEntry;
use crate::series::{distance_from_correlation, extend_dot_product, DataSeries, SubseqStats};

/// Pearson correlation of two windows, clamped to `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QValue(f64);

impl QValue {
    pub fn new(q: f64) -> Self {
        QValue(q.clamp(-1.0, 1.0))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// A lower bound on the distance at `target_length` derived from windows of `base_length`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    pub base_length: usize,
    pub target_length: usize,
    /// Owner deviation at `target_length`.
    pub anchor_sigma: f64,
}

pub fn q_value(qt: f64, a: &SubseqStats, b: &SubseqStats) -> Result<QValue> {
    if a.length != b.length {
        return Err(Error::InvalidParameters(format!(
            "window lengths differ: {} vs {}",
            a.length, b.length
        )));
    }
    if a.constant || b.constant {
        return Err(Error::ZeroVariance);
    }
    let l = a.length as f64;
    Ok(QValue::new((qt / l - a.mean * b.mean) / (a.std * b.std)))
}

/// Rounding allowance on `1 - q²`. Near `q = 1` the square root turns an error
/// of a few ulps into one of about `1e-8`, which could lift the bound above a
/// true distance of zero.
const CORRELATION_SLACK: f64 = 1e-12;

#[inline]
pub(crate) fn bound_value(q: f64, base_len: usize, ratio: f64) -> f64 {
    let l = base_len as f64;
    if q <= 0.0 {
        l.sqrt() * ratio
    } else {
        (l * (1.0 - q * q - CORRELATION_SLACK).max(0.0)).sqrt() * ratio
    }
}

/// Evaluates the bound for base length `base_len` at `target_len`, where
/// `sigma_base` and `sigma_target` are the owner's deviations at those lengths.
pub fn lower_bound(
    q: QValue,
    sigma_base: f64,
    sigma_target: f64,
    base_len: usize,
    target_len: usize,
) -> Result<LowerBound> {
    if !(sigma_target > 0.0) || sigma_base < 0.0 {
        return Err(Error::ZeroVariance);
    }
    if target_len < base_len {
        return Err(Error::InvalidParameters(format!(
            "target length {target_len} is below base length {base_len}"
        )));
    }
    Ok(LowerBound {
        value: bound_value(q.get(), base_len, sigma_base / sigma_target),
        base_length: base_len,
        target_length: target_len,
        anchor_sigma: sigma_target,
    })
}

/// Moves a bound one length further: only the owner's deviation changes.
pub fn scale_bound(lb: LowerBound, sigma_old: f64, sigma_new: f64) -> Result<LowerBound> {
    if !(sigma_old > 0.0) || !(sigma_new > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok(LowerBound {
        value: lb.value * sigma_old / sigma_new,
        base_length: lb.base_length,
        target_length: lb.target_length + 1,
        anchor_sigma: sigma_new,
    })
}

/// Window statistics needed to move one entry to a new length.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EntryStats {
    pub owner_mean: f64,
    pub owner_inv_std: f64,
    pub neighbor_mean: f64,
    pub neighbor_inv_std: f64,
    /// `sigma(owner, len) / sigma(owner, len + 1)`, when the owner extends that far.
    pub owner_ratio: Option<f64>,
}

/// Distance at `len` and bound for `len + 1` from the dot product at `len`.
#[inline]
pub(crate) fn dist_and_lb(qt: f64, len: usize, s: &EntryStats) -> (f64, f64) {
    if s.owner_inv_std == 0.0 {
        return (f64::INFINITY, 0.0);
    }
    let l = len as f64;
    let q = if s.neighbor_inv_std == 0.0 {
        0.0
    } else {
        ((qt - l * s.owner_mean * s.neighbor_mean) * (s.owner_inv_std * s.neighbor_inv_std / l))
            .clamp(-1.0, 1.0)
    };
    let dist = if s.neighbor_inv_std == 0.0 {
        f64::INFINITY
    } else {
        distance_from_correlation(q, len)
    };
    let lb = match s.owner_ratio {
        Some(r) => bound_value(q, len, r),
        None => 0.0,
    };
    (dist, lb)
}

/// Advances `entry` of profile `owner` from `new_len - 1` to `new_len`: extends the
/// dot product, then recomputes the true distance at `new_len` and the bound for
/// `new_len + 1` from fresh statistics.
///
/// Fails with `OutOfRange` when the neighbor no longer fits or has become a trivial
/// match; the caller drops such entries.
pub fn update_dist_and_lb(
    entry: &ProfileEntry,
    owner: usize,
    series: &DataSeries,
    new_len: usize,
) -> Result<ProfileEntry> {
    if new_len < 2 {
        return Err(Error::InvalidParameters("new length must be at least 2".into()));
    }
    let j = entry.neighbor;
    if policy::is_trivial_match(owner, j, new_len) {
        return Err(Error::OutOfRange {
            offset: j,
            length: new_len,
            n: series.len(),
        });
    }
    let qt = extend_dot_product(entry.qt, series, owner, j, new_len - 1)?;
    let a = series.stats(owner, new_len)?;
    let b = series.stats(j, new_len)?;
    let owner_ratio = match series.stats(owner, new_len + 1) {
        Ok(next) if !next.constant && !a.constant => Some(a.std / next.std),
        _ => None,
    };
    let inv = |s: &SubseqStats| if s.constant { 0.0 } else { 1.0 / s.std };
    let stats = EntryStats {
        owner_mean: a.mean,
        owner_inv_std: inv(&a),
        neighbor_mean: b.mean,
        neighbor_inv_std: inv(&b),
        owner_ratio,
    };
    let (dist, lb) = dist_and_lb(qt, new_len, &stats);
    Ok(ProfileEntry {
        neighbor: j,
        qt,
        dist,
        lb,
    })
}
