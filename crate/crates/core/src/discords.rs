//! Top-k m-th discords over a range of lengths.
//!
//! Owners are visited in ascending offset order; an owner that trivially
//! matches a window already in the ranking is skipped. That order can let an
//! earlier, weaker window shadow a stronger overlapping one; the brute-force
//! oracle replays the same order so the two stay comparable.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policy;
use crate::profile::{compute_profile_run, compute_rows, LengthContext, Match, PartialProfile};
use crate::series::{pair_distance, DataSeries, WindowStats};
use crate::valmod::{check_range, LengthTrace, CANONICAL_MARGIN};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordCell {
    #[serde(with = "crate::serde_float")]
    pub distance: f64,
    pub offset: usize,
}

/// k×m ranking for one length: cell `(i, j)` holds the Top-(i+1) (j+1)-th discord.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscordMatrix {
    pub length: usize,
    pub k: usize,
    pub m: usize,
    /// Row-major, `k * m` cells; `None` stands for an empty (−∞) cell.
    pub cells: Vec<Option<DiscordCell>>,
    #[serde(skip)]
    occupancy: BTreeSet<usize>,
}

impl DiscordMatrix {
    pub fn new(length: usize, k: usize, m: usize) -> Self {
        Self {
            length,
            k,
            m,
            cells: vec![None; k * m],
            occupancy: BTreeSet::new(),
        }
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> Option<DiscordCell> {
        self.cells[i * self.m + j]
    }

    /// Last-row value of column `j` (−∞ while the column is not full).
    pub fn threshold(&self, j: usize) -> f64 {
        self.cell(self.k - 1, j)
            .map_or(f64::NEG_INFINITY, |c| c.distance)
    }

    /// Whether `offset` trivially matches a window already in the matrix.
    pub fn conflicts(&self, offset: usize) -> bool {
        let r = policy::exclusion_radius(self.length);
        self.occupancy
            .range(offset.saturating_sub(r - 1)..=offset + (r - 1))
            .next()
            .is_some()
    }

    /// Offers an owner with its `m` best-match distances (ascending). Columns are
    /// tried from `m` down to 1 and rows from the top; the first cell the owner
    /// beats takes it, lower cells shift down. Returns whether it was inserted.
    pub fn offer(&mut self, offset: usize, dists: &[f64]) -> bool {
        debug_assert!(dists.len() >= self.m);
        for j in (0..self.m).rev() {
            for i in 0..self.k {
                let beats = self.cell(i, j).is_none_or(|c| dists[j] > c.distance);
                if beats {
                    if let Some(dropped) = self.cell(self.k - 1, j) {
                        self.occupancy.remove(&dropped.offset);
                    }
                    for row in (i + 1..self.k).rev() {
                        self.cells[row * self.m + j] = self.cells[(row - 1) * self.m + j];
                    }
                    self.cells[i * self.m + j] = Some(DiscordCell {
                        distance: dists[j],
                        offset,
                    });
                    self.occupancy.insert(offset);
                    return true;
                }
            }
        }
        false
    }
}

/// Standalone form of [`DiscordMatrix::offer`].
pub fn update_fixed_length_discords(dkm: &mut DiscordMatrix, dists: &[f64], offset: usize) -> bool {
    dkm.offer(offset, dists)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarDiscordCell {
    /// `distance / sqrt(length)`.
    #[serde(with = "crate::serde_float")]
    pub norm_distance: f64,
    #[serde(with = "crate::serde_float")]
    pub distance: f64,
    pub offset: usize,
    pub length: usize,
}

/// k×m ranking merged over lengths by normalized distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarDiscordMatrix {
    pub k: usize,
    pub m: usize,
    pub cells: Vec<Option<VarDiscordCell>>,
}

impl VarDiscordMatrix {
    pub fn new(k: usize, m: usize) -> Self {
        Self {
            k,
            m,
            cells: vec![None; k * m],
        }
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> Option<VarDiscordCell> {
        self.cells[i * self.m + j]
    }

    /// Cell-wise merge; a later length wins ties.
    pub fn merge(&mut self, dkm: &DiscordMatrix) {
        let scale = (1.0 / dkm.length as f64).sqrt();
        for (slot, cell) in self.cells.iter_mut().zip(&dkm.cells) {
            let Some(c) = cell else { continue };
            let norm = c.distance * scale;
            if slot.is_none_or(|s| norm >= s.norm_distance) {
                *slot = Some(VarDiscordCell {
                    norm_distance: norm,
                    distance: c.distance,
                    offset: c.offset,
                    length: dkm.length,
                });
            }
        }
    }
}

/// Standalone form of [`VarDiscordMatrix::merge`].
pub fn update_variable_length_discords(range: &mut VarDiscordMatrix, dkm: &DiscordMatrix) {
    range.merge(dkm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscordConfig {
    pub lmin: usize,
    pub lmax: usize,
    pub k: usize,
    pub m: usize,
    pub p: usize,
}

#[derive(Debug, Clone)]
pub struct DiscordRun {
    pub per_length: Vec<DiscordMatrix>,
    pub merged: VarDiscordMatrix,
    pub trace: Vec<LengthTrace>,
}

fn check_config(series: &DataSeries, cfg: &DiscordConfig) -> Result<()> {
    if cfg.k == 0 || cfg.m == 0 {
        return Err(Error::InvalidParameters("k and m must be at least 1".into()));
    }
    if cfg.p < cfg.m {
        return Err(Error::InvalidParameters(format!(
            "capacity p ({}) must be at least m ({})",
            cfg.p, cfg.m
        )));
    }
    check_range(series, cfg.lmin, cfg.lmax, cfg.p)
}

/// Offers an owner whose exact `m` nearest neighbors are known; the distances
/// are recomputed canonically when they come close to a column threshold.
fn offer_exact(
    series: &DataSeries,
    stats: &WindowStats,
    dkm: &mut DiscordMatrix,
    owner: usize,
    nearest: &[Match],
) -> bool {
    let m = dkm.m;
    let near = (0..m).any(|j| {
        let t = dkm.threshold(j);
        nearest[j].distance > t - CANONICAL_MARGIN * (1.0 + t.abs())
    });
    if !near {
        return false;
    }
    let mut canon: Vec<(f64, usize)> = nearest[..m]
        .iter()
        .map(|c| (pair_distance(series, stats, owner, c.neighbor), c.neighbor))
        .collect();
    canon.sort_by(|a, b| policy::cmp_candidates(*a, *b));
    let dists: Vec<f64> = canon.iter().map(|c| c.0).collect();
    dkm.offer(owner, &dists)
}

/// Top-k m-th discords of every length in `[lmin, lmax]` and their merge.
pub fn topkm_discord_discovery(series: &DataSeries, cfg: &DiscordConfig) -> Result<DiscordRun> {
    check_config(series, cfg)?;
    let first = compute_profile_run(series, cfg.lmin, cfg.p, cfg.m)?;
    let stats = WindowStats::new(series, cfg.lmin)?;
    let mut dkm = DiscordMatrix::new(cfg.lmin, cfg.k, cfg.m);
    for (i, nearest) in first.nearest.iter().enumerate() {
        if stats.is_constant(i) || nearest.len() < cfg.m || dkm.conflicts(i) {
            continue;
        }
        offer_exact(series, &stats, &mut dkm, i, nearest);
    }
    let count = first.partials.len();
    let mut trace = vec![LengthTrace {
        length: cfg.lmin,
        profiles: count,
        valid: 0,
        non_valid: count,
        recomputed: count,
        full_recompute: true,
    }];
    let mut list = first.partials;
    let mut merged = VarDiscordMatrix::new(cfg.k, cfg.m);
    merged.merge(&dkm);
    let mut per_length = vec![dkm];

    for len in cfg.lmin + 1..=cfg.lmax {
        let (dkm, t) = topkm_next_length(series, &mut list, len, cfg.k, cfg.m, cfg.p)?;
        merged.merge(&dkm);
        per_length.push(dkm);
        trace.push(t);
    }
    Ok(DiscordRun {
        per_length,
        merged,
        trace,
    })
}

/// Ranking at `new_len` from partial profiles valid for `new_len - 1`.
///
/// An owner whose `m`-th stored distance is below its floor is certified from
/// the stored entries. Otherwise the stored distances are upper bounds of the
/// true ones, and the row is recomputed only if one of them could still beat
/// the last row of its column.
pub fn topkm_next_length(
    series: &DataSeries,
    list: &mut Vec<PartialProfile>,
    new_len: usize,
    k: usize,
    m: usize,
    p: usize,
) -> Result<(DiscordMatrix, LengthTrace)> {
    let ctx = LengthContext::new(series, new_len)?;
    let count = ctx.count();
    list.truncate(count);
    {
        use rayon::prelude::*;
        list.par_iter_mut().for_each(|pp| pp.advance(&ctx));
    }
    let mut dkm = DiscordMatrix::new(new_len, k, m);
    let mut valid = 0;
    let mut recomputed = 0;
    for i in 0..count {
        if ctx.cur.is_constant(i) {
            valid += 1;
            continue;
        }
        let pp = &list[i];
        let floor = pp.max_lb(ctx.cur.std[i]).unwrap_or(0.0);
        let stored = pp.nearest_m(m);
        let certified =
            floor == f64::INFINITY || (stored.len() == m && stored[m - 1].distance < floor);
        if certified {
            valid += 1;
        }
        if dkm.conflicts(i) {
            continue;
        }
        let nearest = if certified {
            stored
        } else {
            let promising = (0..m).any(|j| {
                let upper = stored.get(j).map_or(f64::INFINITY, |c| c.distance);
                let t = dkm.threshold(j);
                upper > t - CANONICAL_MARGIN * (1.0 + t.abs())
            });
            if !promising {
                continue;
            }
            recomputed += 1;
            let row = compute_rows(&ctx, &[i], p, m)
                .pop()
                .expect("one row requested");
            list[i] = row.partial;
            row.nearest
        };
        if nearest.len() < m {
            continue;
        }
        offer_exact(series, &ctx.cur, &mut dkm, i, &nearest);
    }
    Ok((
        dkm,
        LengthTrace {
            length: new_len,
            profiles: count,
            valid,
            non_valid: count - valid,
            recomputed,
            full_recompute: false,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::compute_matrix_profile;
    use crate::series::ingest;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn offer_fills_last_column_first() {
        let mut d = DiscordMatrix::new(10, 2, 2);
        assert!(d.offer(0, &[1.0, 2.0]));
        assert_eq!(d.cell(0, 1), Some(DiscordCell { distance: 2.0, offset: 0 }));
        assert_eq!(d.cell(0, 0), None);
        assert!(d.offer(20, &[1.5, 1.8]));
        assert_eq!(d.cell(1, 1).unwrap().offset, 20);
        // beats nothing in column 1, takes the empty cell in column 0
        assert!(d.offer(40, &[0.5, 0.6]));
        assert_eq!(d.cell(0, 0).unwrap().offset, 40);
        assert!(d.offer(60, &[0.1, 3.0]));
        assert_eq!(d.cell(0, 1).unwrap().offset, 60);
        assert_eq!(d.cell(1, 1).unwrap().offset, 0);
        assert!(!d.conflicts(20));
        assert!(d.conflicts(62));
        assert_eq!(d.threshold(1), 2.0);
    }

    #[test]
    fn merge_prefers_later_length_on_ties() {
        let mut a = DiscordMatrix::new(4, 1, 1);
        a.offer(3, &[2.0]);
        let mut b = DiscordMatrix::new(16, 1, 1);
        b.offer(7, &[4.0]);
        let mut v = VarDiscordMatrix::new(1, 1);
        v.merge(&a);
        assert_eq!(v.cell(0, 0).unwrap().length, 4);
        v.merge(&b);
        let c = v.cell(0, 0).unwrap();
        assert_eq!((c.offset, c.length, c.norm_distance), (7, 16, 1.0));
    }

    #[test]
    fn single_length_top_discord_replays_profile() {
        let s = ingest(noise(500, 3)).unwrap();
        let run = topkm_discord_discovery(
            &s,
            &DiscordConfig { lmin: 24, lmax: 24, k: 1, m: 1, p: 5 },
        )
        .unwrap();
        let (mp, _) = compute_matrix_profile(&s, 24, 1).unwrap();
        // ascending scan where a window overlapping the current leader cannot replace it
        let mut best: Option<(usize, f64)> = None;
        for (i, &d) in mp.distances.iter().enumerate() {
            if let Some((o, bd)) = best {
                if policy::is_trivial_match(o, i, 24) || d <= bd {
                    continue;
                }
            }
            best = Some((i, d));
        }
        assert_eq!(run.merged.cell(0, 0).unwrap().offset, best.unwrap().0);
    }

    #[test]
    fn spike_is_top_discord_at_every_length() {
        let mut v: Vec<f64> = (0..800).map(|i| (i as f64 * 0.2).sin()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for x in v.iter_mut() {
            *x += rng.random_range(-0.01..0.01);
        }
        v[400] += 3.0;
        let s = ingest(v).unwrap();
        let run = topkm_discord_discovery(
            &s,
            &DiscordConfig { lmin: 16, lmax: 24, k: 1, m: 1, p: 4 },
        )
        .unwrap();
        for d in &run.per_length {
            let c = d.cell(0, 0).unwrap();
            assert!(c.offset <= 400 && 400 < c.offset + d.length, "length {}", d.length);
        }
    }

    #[test]
    fn capacity_does_not_change_results() {
        let s = ingest(noise(600, 9)).unwrap();
        let a = topkm_discord_discovery(&s, &DiscordConfig { lmin: 16, lmax: 30, k: 3, m: 3, p: 3 }).unwrap();
        let b = topkm_discord_discovery(&s, &DiscordConfig { lmin: 16, lmax: 30, k: 3, m: 3, p: 12 }).unwrap();
        assert_eq!(a.per_length, b.per_length);
        assert_eq!(a.merged, b.merged);
    }

    #[test]
    fn rejects_capacity_below_m() {
        let s = ingest(noise(300, 1)).unwrap();
        let err = topkm_discord_discovery(&s, &DiscordConfig { lmin: 16, lmax: 20, k: 1, m: 3, p: 2 })
            .unwrap_err();
        assert!(matches!(err, Error::InvalidParameters(msg) if msg.contains("at least m")));
    }
}
