//! Brute-force reference implementations and run diagnostics.
//!
//! The oracles z-normalize every window explicitly (two-pass mean and
//! deviation) and sum squared differences; they share only the exclusion,
//! tie-break and zero-variance conventions of [`crate::policy`] with the engine.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discords::{DiscordMatrix, VarDiscordMatrix};
use crate::error::{Error, Result};
use crate::policy;
use crate::profile::MatrixProfile;
use crate::series::DataSeries;
use crate::valmod::{LengthTrace, Valmp};

/// Z-normalized copies of every window of length `len`; `None` for constant windows.
pub fn znormalized_windows(series: &DataSeries, len: usize) -> Vec<Option<Vec<f64>>> {
    let t = series.values();
    let eps = policy::zero_variance_threshold(series.max_abs());
    (0..policy::window_count(t.len(), len))
        .map(|i| {
            let w = &t[i..i + len];
            let mean = w.iter().sum::<f64>() / len as f64;
            let var = w.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / len as f64;
            let std = var.sqrt();
            (std >= eps).then(|| w.iter().map(|x| (x - mean) / std).collect())
        })
        .collect()
}

/// Euclidean distance of two equally long vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// The `m` nearest non-trivial neighbors of every window, ascending by
/// `(distance, offset)`. Constant windows have no neighbors.
pub fn nearest_neighbors(series: &DataSeries, len: usize, m: usize) -> Vec<Vec<(f64, usize)>> {
    let z = znormalized_windows(series, len);
    let count = z.len();
    let mut best: Vec<Vec<(f64, usize)>> = vec![Vec::with_capacity(m + 1); count];
    let push = |list: &mut Vec<(f64, usize)>, cand: (f64, usize)| {
        if list.len() == m
            && policy::cmp_candidates(cand, list[m - 1]).is_ge()
        {
            return;
        }
        let pos = list.partition_point(|c| policy::cmp_candidates(*c, cand).is_lt());
        list.insert(pos, cand);
        list.truncate(m);
    };
    for i in 0..count {
        let Some(zi) = &z[i] else { continue };
        for j in i + policy::exclusion_radius(len)..count {
            let Some(zj) = &z[j] else { continue };
            let d = euclidean(zi, zj);
            push(&mut best[i], (d, j));
            push(&mut best[j], (d, i));
        }
    }
    best
}

/// Brute-force result for one length.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleLength {
    pub profile: MatrixProfile,
    /// `(offset, neighbor, distance)` of the smallest profile entry, smaller offset on ties.
    pub motif: Option<(usize, usize, f64)>,
}

/// Exhaustive matrix profile and motif pair of every length in `[lmin, lmax]`.
pub fn brute_force_motifs(series: &DataSeries, lmin: usize, lmax: usize) -> Vec<OracleLength> {
    (lmin..=lmax)
        .into_par_iter()
        .map(|len| {
            let nn = nearest_neighbors(series, len, 1);
            let profile = MatrixProfile {
                length: len,
                distances: nn
                    .iter()
                    .map(|v| v.first().map_or(f64::INFINITY, |c| c.0))
                    .collect(),
                indices: nn.iter().map(|v| v.first().map(|c| c.1)).collect(),
            };
            let motif = profile.motif();
            OracleLength { profile, motif }
        })
        .collect()
}

/// Variable-length profile assembled from brute-force matrix profiles.
pub fn oracle_valmp(lengths: &[OracleLength]) -> Valmp {
    let mut v = Valmp::new(lengths.first().map_or(0, |l| l.profile.len()));
    for l in lengths {
        v.update(&l.profile.distances, &l.profile.indices, l.profile.len(), l.profile.length);
    }
    v
}

/// Per-length discord matrices and their merge, replaying the engine's
/// ascending-offset insertion on exhaustively computed neighbors.
pub fn brute_force_discords(
    series: &DataSeries,
    lmin: usize,
    lmax: usize,
    k: usize,
    m: usize,
) -> (Vec<DiscordMatrix>, VarDiscordMatrix) {
    let per_length: Vec<DiscordMatrix> = (lmin..=lmax)
        .into_par_iter()
        .map(|len| {
            let nn = nearest_neighbors(series, len, m);
            let mut dkm = DiscordMatrix::new(len, k, m);
            for (i, list) in nn.iter().enumerate() {
                if list.len() < m || dkm.conflicts(i) {
                    continue;
                }
                let dists: Vec<f64> = list.iter().map(|c| c.0).collect();
                dkm.offer(i, &dists);
            }
            dkm
        })
        .collect();
    let mut merged = VarDiscordMatrix::new(k, m);
    for d in &per_length {
        merged.merge(d);
    }
    (per_length, merged)
}

/// Windows strictly within `radius` of either anchor, ascending by
/// `(distance to the closer anchor, offset)`, anchors included at distance 0.
pub fn range_query(
    series: &DataSeries,
    len: usize,
    anchors: (usize, usize),
    radius: f64,
) -> Vec<(f64, usize)> {
    let z = znormalized_windows(series, len);
    let (Some(za), Some(zb)) = (&z[anchors.0], &z[anchors.1]) else {
        return Vec::new();
    };
    let mut out: Vec<(f64, usize)> = z
        .iter()
        .enumerate()
        .filter_map(|(j, w)| {
            if j == anchors.0 || j == anchors.1 {
                return Some((0.0, j));
            }
            let w = w.as_ref()?;
            let mut d = f64::INFINITY;
            if !policy::is_trivial_match(anchors.0, j, len) {
                d = d.min(euclidean(za, w));
            }
            if !policy::is_trivial_match(anchors.1, j, len) {
                d = d.min(euclidean(zb, w));
            }
            (d < radius).then_some((d, j))
        })
        .collect();
    out.sort_by(|a, b| policy::cmp_candidates(*a, *b));
    out
}

/// Tightness of a lower bound: `lb / dist` in `[0, 1]`.
pub fn tlb(lb: f64, dist: f64) -> Result<f64> {
    if !(dist > 0.0) {
        return Err(Error::ZeroDistance);
    }
    if lb > dist + 1e-9 {
        return Err(Error::InvalidParameters(format!(
            "lower bound {lb} exceeds distance {dist}"
        )));
    }
    Ok((lb / dist).clamp(0.0, 1.0))
}

/// Aggregated partial-profile repartition of a run. Totals cover the lengths
/// after the first, whose full computation has no partial profiles to prune.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruningReport {
    pub lengths: Vec<LengthTrace>,
    pub profiles: usize,
    pub valid: usize,
    pub non_valid: usize,
    pub recomputed: usize,
    pub full_recomputes: usize,
    /// `recomputed / profiles` (0 when no profile was considered).
    pub recomputed_fraction: f64,
}

pub fn pruning_report(trace: &[LengthTrace]) -> PruningReport {
    let rest = trace.get(1..).unwrap_or(&[]);
    let profiles = rest.iter().map(|t| t.profiles).sum();
    let recomputed = rest.iter().map(|t| t.recomputed).sum();
    PruningReport {
        lengths: trace.to_vec(),
        profiles,
        valid: rest.iter().map(|t| t.valid).sum(),
        non_valid: rest.iter().map(|t| t.non_valid).sum(),
        recomputed,
        full_recomputes: rest.iter().filter(|t| t.full_recompute).count(),
        recomputed_fraction: if profiles == 0 {
            0.0
        } else {
            recomputed as f64 / profiles as f64
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ingest;

    #[test]
    fn planted_pair_has_zero_distance() {
        let mut v = crate::synthetic::uniform_noise(200, 4);
        let pat: Vec<f64> = (0..16).map(|k| (k * k) as f64).collect();
        v[20..36].copy_from_slice(&pat);
        v[120..136].copy_from_slice(&pat);
        let s = ingest(v).unwrap();
        let o = brute_force_motifs(&s, 16, 16);
        let (i, j, d) = o[0].motif.unwrap();
        assert_eq!((i, j), (20, 120));
        assert!(d < 1e-9);
    }

    #[test]
    fn tlb_cases() {
        assert_eq!(tlb(2.0, 2.0).unwrap(), 1.0);
        assert_eq!(tlb(0.0, 2.0).unwrap(), 0.0);
        assert_eq!(tlb(1.0, 0.0).unwrap_err(), Error::ZeroDistance);
        assert!(tlb(3.0, 2.0).is_err());
    }

    #[test]
    fn report_counts_add_up() {
        let t = |length, valid, recomputed| LengthTrace {
            length,
            profiles: 100,
            valid,
            non_valid: 100 - valid,
            recomputed,
            full_recompute: false,
        };
        let r = pruning_report(&[t(10, 0, 100), t(11, 100, 0), t(12, 90, 4)]);
        assert_eq!((r.profiles, r.valid, r.non_valid, r.recomputed), (200, 190, 10, 4));
        assert_eq!(r.recomputed_fraction, 0.02);
        assert_eq!(pruning_report(&[t(10, 100, 0), t(11, 100, 0)]).recomputed_fraction, 0.0);
    }

    #[test]
    fn skips_owner_without_enough_neighbors() {
        let v: Vec<f64> = (0..30).map(|i| ((i * 37) % 11) as f64).collect();
        let s = ingest(v).unwrap();
        // 11 windows of length 20, radius 10: each has at most one non-trivial neighbor
        let (per, _) = brute_force_discords(&s, 20, 20, 1, 2);
        assert!(per[0].cells.iter().all(|c| c.is_none()));
    }
}
