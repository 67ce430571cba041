//! Full matrix-profile computation for one length (row-wise, STOMP style) that
//! also harvests, for every row, the neighbors with the smallest lower bound for
//! the next length. Those partial distance profiles are what later lengths reuse.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_value, dist_and_lb, EntryStats};
use crate::error::{Error, Result};
use crate::policy;
use crate::series::{
    distance_from_correlation, dot, sliding_dot_product, DataSeries, WindowStats,
};

/// Rows per independently seeded block. Fixed so results do not depend on the thread count.
const ROW_BLOCK: usize = 1024;
/// Largest offset gap bridged by advancing dot products instead of a fresh convolution.
const MAX_ROW_GAP: usize = 48;

/// One neighbor of a partial distance profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileEntry {
    pub neighbor: usize,
    /// Dot product of owner and neighbor windows at the profile's current length.
    pub qt: f64,
    /// Z-normalized distance at the current length (`inf` for a constant neighbor).
    pub dist: f64,
    /// Lower bound for the next length.
    pub lb: f64,
}

/// Bound on the distance of every pair that is *not* stored in a partial profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Floor {
    /// Every eligible neighbor is stored.
    Unbounded,
    /// Worst stored correlation at harvest time; evaluates to the largest stored bound.
    Bound {
        q: f64,
        base_len: usize,
        base_sigma: f64,
    },
}

/// The `p` neighbors of one owner with the smallest lower bound, carried across lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialProfile {
    pub owner: usize,
    /// Length at which `entries` hold exact distances.
    pub length: usize,
    /// Length of the full row the entries were harvested from.
    pub harvest_length: usize,
    /// Sorted by neighbor offset.
    pub entries: Vec<ProfileEntry>,
    pub floor: Floor,
}

impl PartialProfile {
    /// Largest stored lower bound evaluated at the current length, given the owner's
    /// deviation at that length. `None` at the harvest length, where the bound does
    /// not cover pairs that were ineligible for the next length.
    pub fn max_lb(&self, owner_sigma: f64) -> Option<f64> {
        if self.length <= self.harvest_length {
            return None;
        }
        Some(match self.floor {
            Floor::Unbounded => f64::INFINITY,
            Floor::Bound {
                q,
                base_len,
                base_sigma,
            } => {
                if owner_sigma > 0.0 {
                    bound_value(q, base_len, base_sigma / owner_sigma)
                } else {
                    f64::INFINITY
                }
            }
        })
    }

    /// Closest stored neighbor (smaller offset on ties); ignores infinite distances.
    pub fn nearest(&self) -> Option<Match> {
        self.entries
            .iter()
            .filter(|e| e.dist.is_finite())
            .min_by(|a, b| policy::cmp_candidates((a.dist, a.neighbor), (b.dist, b.neighbor)))
            .map(|e| Match {
                distance: e.dist,
                neighbor: e.neighbor,
            })
    }

    /// The `m` closest stored neighbors, ascending.
    pub fn nearest_m(&self, m: usize) -> Vec<Match> {
        let mut all: Vec<Match> = self
            .entries
            .iter()
            .filter(|e| e.dist.is_finite())
            .map(|e| Match {
                distance: e.dist,
                neighbor: e.neighbor,
            })
            .collect();
        all.sort_by(|a, b| policy::cmp_candidates((a.distance, a.neighbor), (b.distance, b.neighbor)));
        all.truncate(m);
        all
    }

    /// Moves every entry to `ctx.len` (one more than the current length), dropping
    /// neighbors that no longer fit or that became trivial matches.
    pub(crate) fn advance(&mut self, ctx: &LengthContext<'_>) {
        let len = ctx.len;
        debug_assert_eq!(self.length + 1, len);
        let i = self.owner;
        let n = ctx.series.len();
        let t = ctx.series.values();
        let owner_tail = t[i + len - 1];
        let owner_ratio = ctx.owner_ratio(i);
        let cur = &ctx.cur;
        self.entries.retain_mut(|e| {
            let j = e.neighbor;
            if j + len > n || policy::is_trivial_match(i, j, len) {
                return false;
            }
            e.qt += owner_tail * t[j + len - 1];
            let stats = EntryStats {
                owner_mean: cur.mean[i],
                owner_inv_std: cur.inv_std[i],
                neighbor_mean: cur.mean[j],
                neighbor_inv_std: cur.inv_std[j],
                owner_ratio,
            };
            let (dist, lb) = dist_and_lb(e.qt, len, &stats);
            e.dist = dist;
            e.lb = lb;
            true
        });
        self.length = len;
    }
}

/// A neighbor and its distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Match {
    pub distance: f64,
    pub neighbor: usize,
}

/// Nearest-neighbor distance and offset of every window of one length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixProfile {
    pub length: usize,
    /// `inf` where the window is constant or has no non-trivial neighbor.
    #[serde(with = "crate::serde_float::vec")]
    pub distances: Vec<f64>,
    pub indices: Vec<Option<usize>>,
}

impl MatrixProfile {
    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Smallest entry as `(offset, neighbor, distance)`; ties go to the smaller offset.
    pub fn motif(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, (&d, idx)) in self.distances.iter().zip(&self.indices).enumerate() {
            if let Some(j) = idx {
                if best.is_none_or(|b| d < b.2) {
                    best = Some((i, *j, d));
                }
            }
        }
        best
    }
}

/// Everything one full pass over the rows produces.
#[derive(Debug, Clone)]
pub struct ProfileRun {
    pub profile: MatrixProfile,
    pub partials: Vec<PartialProfile>,
    /// Per row, the `m` nearest non-trivial neighbors (ascending), when requested.
    pub nearest: Vec<Vec<Match>>,
}

/// Window statistics for one length and the next, shared by every row.
pub(crate) struct LengthContext<'a> {
    pub series: &'a DataSeries,
    pub len: usize,
    pub cur: WindowStats,
    pub next: Option<WindowStats>,
    /// No window of this length is constant.
    pub all_varying: bool,
}

impl<'a> LengthContext<'a> {
    pub fn new(series: &'a DataSeries, len: usize) -> Result<Self> {
        let cur = WindowStats::new(series, len)?;
        let next = if len < series.len() {
            Some(WindowStats::new(series, len + 1)?)
        } else {
            None
        };
        let all_varying = cur.non_constant() == cur.count();
        Ok(Self {
            series,
            len,
            cur,
            next,
            all_varying,
        })
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.cur.count()
    }

    /// `sigma(i, len) / sigma(i, len + 1)` when window `i` extends to the next length.
    #[inline]
    pub fn owner_ratio(&self, i: usize) -> Option<f64> {
        match &self.next {
            Some(next) if i < next.count() => Some(self.cur.std[i] * next.inv_std[i]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    key: f64,
    q: f64,
    qt: f64,
    neighbor: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    // Greater means worse: lower correlation (larger bound), then larger offset.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then(self.neighbor.cmp(&other.neighbor))
    }
}

/// Result of one row.
#[derive(Debug, Clone)]
pub(crate) struct RowResult {
    pub best: Option<Match>,
    pub nearest: Vec<Match>,
    pub partial: PartialProfile,
}

fn constant_row(i: usize, len: usize) -> RowResult {
    RowResult {
        best: None,
        nearest: Vec::new(),
        partial: PartialProfile {
            owner: i,
            length: len,
            harvest_length: len,
            entries: Vec::new(),
            floor: Floor::Bound {
                q: 1.0,
                base_len: len,
                base_sigma: 0.0,
            },
        },
    }
}

/// Largest value of `q[range]` and its first position.
#[inline]
fn argmax(q: &[f64], offset: usize) -> Option<(f64, usize)> {
    if q.is_empty() {
        return None;
    }
    let mut lanes = [f64::NEG_INFINITY; 8];
    let chunks = q.chunks_exact(8);
    let tail = chunks.remainder();
    for c in chunks {
        for k in 0..8 {
            lanes[k] = if c[k] > lanes[k] { c[k] } else { lanes[k] };
        }
    }
    let mut best = lanes.iter().copied().fold(f64::NEG_INFINITY, |a, b| if b > a { b } else { a });
    for &x in tail {
        if x > best {
            best = x;
        }
    }
    let pos = q.iter().position(|&x| x == best)?;
    Some((best, offset + pos))
}

/// Scans row `i`; `q[j]` holds the correlation of windows `i` and `j` (0 for a constant `j`).
pub(crate) fn process_row(
    ctx: &LengthContext<'_>,
    i: usize,
    qt: &[f64],
    q: &[f64],
    p: usize,
    m: usize,
) -> RowResult {
    let len = ctx.len;
    let count = ctx.count();
    let cur = &ctx.cur;
    if cur.is_constant(i) {
        return constant_row(i, len);
    }
    let radius = policy::exclusion_radius(len);
    let radius_next = policy::exclusion_radius(len + 1);
    let left_end = (i + 1).saturating_sub(radius);
    let right_start = (i + radius).min(count);

    let mut best: Option<(f64, usize)> = None;
    let mut top_m: Vec<(f64, usize)> = Vec::with_capacity(m + 1);
    if ctx.all_varying && m == 0 {
        for cand in [argmax(&q[..left_end], 0), argmax(&q[right_start..], right_start)]
            .into_iter()
            .flatten()
        {
            if best.is_none_or(|b| cand.0 > b.0) {
                best = Some(cand);
            }
        }
    } else {
        let inv_std = &cur.inv_std;
        for j in (0..left_end).chain(right_start..count) {
            if inv_std[j] == 0.0 {
                continue;
            }
            let x = q[j];
            if best.is_none_or(|b| x > b.0) {
                best = Some((x, j));
            }
            if m > 0 && (top_m.len() < m || x > top_m[top_m.len() - 1].0) {
                let pos = top_m.partition_point(|c| c.0 >= x);
                top_m.insert(pos, (x, j));
                top_m.truncate(m);
            }
        }
    }

    // neighbors that still exist and are non-trivial at len + 1
    let (entries, floor) = if ctx.owner_ratio(i).is_some() {
        let end = count - 1;
        let left = 0..(i + 1).saturating_sub(radius_next).min(end);
        let right = (i + radius_next).min(end)..end;
        let eligible = left.len() + right.len();
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(p + 1);
        let mut worst = f64::INFINITY;
        for j in left.chain(right) {
            let x = q[j];
            if heap.len() < p {
                heap.push(Candidate {
                    key: x.clamp(0.0, 1.0),
                    q: x.clamp(-1.0, 1.0),
                    qt: qt[j],
                    neighbor: j,
                });
                if heap.len() == p {
                    worst = heap.peek().map_or(f64::INFINITY, |c| c.key);
                }
            } else if x > worst {
                let key = x.min(1.0);
                if key > worst {
                    heap.pop();
                    heap.push(Candidate {
                        key,
                        q: key,
                        qt: qt[j],
                        neighbor: j,
                    });
                    worst = heap.peek().map_or(f64::INFINITY, |c| c.key);
                }
            }
        }
        let floor = match heap.peek() {
            Some(w) if eligible > heap.len() => Floor::Bound {
                q: w.key,
                base_len: len,
                base_sigma: cur.std[i],
            },
            _ => Floor::Unbounded,
        };
        let ratio = ctx.owner_ratio(i).unwrap_or(0.0);
        let mut entries: Vec<ProfileEntry> = heap
            .into_vec()
            .into_iter()
            .map(|c| ProfileEntry {
                neighbor: c.neighbor,
                qt: c.qt,
                dist: if cur.inv_std[c.neighbor] == 0.0 {
                    f64::INFINITY
                } else {
                    distance_from_correlation(c.q, len)
                },
                lb: bound_value(c.q, len, ratio),
            })
            .collect();
        entries.sort_unstable_by_key(|e| e.neighbor);
        (entries, floor)
    } else {
        (Vec::new(), Floor::Unbounded)
    };

    RowResult {
        best: best.map(|(x, j)| Match {
            distance: distance_from_correlation(x.min(1.0), len),
            neighbor: j,
        }),
        nearest: top_m
            .into_iter()
            .map(|(x, j)| Match {
                distance: distance_from_correlation(x.min(1.0), len),
                neighbor: j,
            })
            .collect(),
        partial: PartialProfile {
            owner: i,
            length: len,
            harvest_length: len,
            entries,
            floor,
        },
    }
}

/// Splits ascending `rows` into blocks that each start from a fresh convolution.
fn row_blocks(rows: &[usize]) -> Vec<&[usize]> {
    let mut blocks = Vec::new();
    let mut start = 0;
    for k in 1..=rows.len() {
        let split = k == rows.len()
            || rows[k] - rows[k - 1] > MAX_ROW_GAP
            || rows[k] / ROW_BLOCK != rows[start] / ROW_BLOCK;
        if split {
            blocks.push(&rows[start..k]);
            start = k;
        }
    }
    blocks
}

/// Dot products of query `offset` from those of `offset - 1` (same arithmetic
/// as [`crate::series::advance_dot_products`], written to a second buffer so it
/// vectorizes), fused with the correlations of the new row.
#[inline]
fn advance_into(
    ctx: &LengthContext<'_>,
    prev: &[f64],
    out: &mut [f64],
    q: &mut [f64],
    offset: usize,
) {
    let t = ctx.series.values();
    let len = ctx.len;
    let count = prev.len();
    let head = t[offset - 1];
    let tail = t[offset + len - 1];
    let cur = &ctx.cur;
    let l = len as f64;
    let shift = l * cur.mean[offset];
    let scale = cur.inv_std[offset] / l;
    out[0] = dot(&t[offset..offset + len], &t[..len]);
    q[0] = (out[0] - shift * cur.mean[0]) * (scale * cur.inv_std[0]);
    for (((((o, x), &pq), &a), &b), (&mu, &inv)) in out[1..]
        .iter_mut()
        .zip(&mut q[1..])
        .zip(&prev[..count - 1])
        .zip(&t[..count - 1])
        .zip(&t[len..len + count - 1])
        .zip(cur.mean[1..].iter().zip(&cur.inv_std[1..]))
    {
        let d = pq - a * head + b * tail;
        *o = d;
        *x = (d - shift * mu) * (scale * inv);
    }
}

#[inline]
fn correlations(ctx: &LengthContext<'_>, i: usize, qt: &[f64], q: &mut [f64]) {
    let cur = &ctx.cur;
    let l = ctx.len as f64;
    let shift = l * cur.mean[i];
    let scale = cur.inv_std[i] / l;
    for (((x, &d), &mu), &inv) in q.iter_mut().zip(qt).zip(&cur.mean).zip(&cur.inv_std) {
        *x = (d - shift * mu) * (scale * inv);
    }
}

/// Processes the given ascending rows at `ctx.len`, in parallel over blocks.
pub(crate) fn compute_rows(
    ctx: &LengthContext<'_>,
    rows: &[usize],
    p: usize,
    m: usize,
) -> Vec<RowResult> {
    let series = ctx.series;
    let len = ctx.len;
    let values = series.values();
    let count = ctx.count();
    row_blocks(rows)
        .into_par_iter()
        .map(|block| {
            let first = block[0];
            let mut qt = sliding_dot_product(&values[first..first + len], series)
                .expect("window length fits the series");
            let mut spare = vec![0.0; count];
            let mut q = vec![0.0; count];
            let mut at = first;
            let mut out = Vec::with_capacity(block.len());
            correlations(ctx, first, &qt, &mut q);
            for &row in block {
                while at < row {
                    at += 1;
                    advance_into(ctx, &qt, &mut spare, &mut q, at);
                    std::mem::swap(&mut qt, &mut spare);
                }
                if ctx.cur.is_constant(row) {
                    out.push(constant_row(row, len));
                    continue;
                }
                out.push(process_row(ctx, row, &qt, &q, p, m));
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub(crate) fn check_length(series: &DataSeries, len: usize) -> Result<()> {
    if len < 4 {
        return Err(Error::InvalidParameters(format!(
            "subsequence length must be at least 4, got {len}"
        )));
    }
    let n = series.len();
    if len > n || n - len < policy::exclusion_radius(len) {
        return Err(Error::SeriesTooShort { n, length: len });
    }
    Ok(())
}

/// Full matrix profile at `len`, plus the partial distance profiles (capacity `p`)
/// and, when `m > 0`, the `m` nearest neighbors of every window.
pub fn compute_profile_run(series: &DataSeries, len: usize, p: usize, m: usize) -> Result<ProfileRun> {
    check_length(series, len)?;
    if p == 0 {
        return Err(Error::InvalidParameters("capacity p must be at least 1".into()));
    }
    let ctx = LengthContext::new(series, len)?;
    if ctx.cur.non_constant() == 0 {
        return Err(Error::AllConstant(len));
    }
    let rows: Vec<usize> = (0..ctx.count()).collect();
    let results = compute_rows(&ctx, &rows, p, m);
    let mut distances = Vec::with_capacity(results.len());
    let mut indices = Vec::with_capacity(results.len());
    let mut partials = Vec::with_capacity(results.len());
    let mut nearest = Vec::with_capacity(if m > 0 { results.len() } else { 0 });
    for r in results {
        match r.best {
            Some(b) => {
                distances.push(b.distance);
                indices.push(Some(b.neighbor));
            }
            None => {
                distances.push(f64::INFINITY);
                indices.push(None);
            }
        }
        if m > 0 {
            nearest.push(r.nearest);
        }
        partials.push(r.partial);
    }
    Ok(ProfileRun {
        profile: MatrixProfile {
            length: len,
            distances,
            indices,
        },
        partials,
        nearest,
    })
}

/// Full matrix profile at `len` and the partial distance profiles of capacity `p`.
pub fn compute_matrix_profile(
    series: &DataSeries,
    len: usize,
    p: usize,
) -> Result<(MatrixProfile, Vec<PartialProfile>)> {
    let run = compute_profile_run(series, len, p, 0)?;
    Ok((run.profile, run.partials))
}

/// Minimum of a distance row outside the exclusion zone of `i`; ties go to the smaller offset.
pub fn min_with_exclusion(row: &[f64], i: usize, len: usize) -> Result<(f64, usize)> {
    row.iter()
        .enumerate()
        .filter(|(j, d)| !policy::is_trivial_match(i, *j, len) && d.is_finite())
        .min_by(|a, b| policy::cmp_candidates((*a.1, a.0), (*b.1, b.0)))
        .map(|(j, d)| (*d, j))
        .ok_or(Error::NoValidNeighbor {
            offset: i,
            length: len,
        })
}

/// Exact distance row of window `i` at `len` (`inf` for trivial matches and constant windows).
pub fn distance_profile(series: &DataSeries, stats: &WindowStats, i: usize) -> Result<Vec<f64>> {
    let len = stats.len;
    let qt = sliding_dot_product(series.window(i, len)?, series)?;
    let l = len as f64;
    Ok((0..stats.count())
        .map(|j| {
            if policy::is_trivial_match(i, j, len) || stats.is_constant(i) || stats.is_constant(j) {
                f64::INFINITY
            } else {
                let q = (qt[j] - l * stats.mean[i] * stats.mean[j]) * (stats.inv_std[i] * stats.inv_std[j] / l);
                distance_from_correlation(q.clamp(-1.0, 1.0), len)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ingest;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    fn naive_row(s: &DataSeries, i: usize, len: usize) -> Vec<f64> {
        let st = WindowStats::new(s, len).unwrap();
        (0..st.count())
            .map(|j| {
                if policy::is_trivial_match(i, j, len) {
                    f64::INFINITY
                } else {
                    crate::series::pair_distance(s, &st, i, j)
                }
            })
            .collect()
    }

    #[test]
    fn planted_duplicate_is_found() {
        let mut v = noise(400, 1);
        let pattern = noise(32, 2);
        v[50..82].copy_from_slice(&pattern);
        v[300..332].copy_from_slice(&pattern);
        let s = ingest(v).unwrap();
        let (mp, _) = compute_matrix_profile(&s, 32, 5).unwrap();
        assert!(mp.distances[50] < 1e-5);
        assert!(mp.distances[300] < 1e-5);
        assert_eq!(mp.indices[50], Some(300));
        assert_eq!(mp.indices[300], Some(50));
    }

    #[test]
    fn full_capacity_keeps_whole_row() {
        let s = ingest(noise(120, 3)).unwrap();
        let len = 10;
        let (mp, partials) = compute_matrix_profile(&s, len, 1000).unwrap();
        for (i, part) in partials.iter().enumerate() {
            assert_eq!(part.floor, Floor::Unbounded);
            if i + len < s.len() {
                let eligible = (0..s.len() - len)
                    .filter(|&j| !policy::is_trivial_match(i, j, len + 1))
                    .count();
                assert_eq!(part.entries.len(), eligible);
            }
            // the next-length-eligible subset might miss the boundary neighbor
            if let Some(best) = part.nearest() {
                assert!(best.distance >= mp.distances[i] - 1e-12);
            }
        }
    }

    #[test]
    fn harvest_keeps_smallest_bounds() {
        let s = ingest(noise(200, 9)).unwrap();
        let len = 12;
        let p = 6;
        let (_, partials) = compute_matrix_profile(&s, len, p).unwrap();
        let t = s.values();
        for part in partials.iter().take(150) {
            let i = part.owner;
            let mut all: Vec<(f64, usize)> = (0..s.len() - len)
                .filter(|&j| !policy::is_trivial_match(i, j, len + 1))
                .map(|j| {
                    let a = s.stats(i, len).unwrap();
                    let b = s.stats(j, len).unwrap();
                    let q = crate::bounds::q_value(dot(&t[i..i + len], &t[j..j + len]), &a, &b)
                        .unwrap()
                        .get();
                    (-q.max(0.0), j)
                })
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let expected: Vec<usize> = {
                let mut v: Vec<usize> = all.iter().take(p).map(|c| c.1).collect();
                v.sort();
                v
            };
            let got: Vec<usize> = part.entries.iter().map(|e| e.neighbor).collect();
            assert_eq!(got, expected, "owner {i}");
        }
    }

    #[test]
    fn matches_naive_profile() {
        let mut x = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let v: Vec<f64> = (0..500)
            .map(|_| {
                x += rng.random_range(-1.0..1.0);
                x
            })
            .collect();
        let s = ingest(v).unwrap();
        let (mp, _) = compute_matrix_profile(&s, 32, 5).unwrap();
        for i in 0..mp.len() {
            let row = naive_row(&s, i, 32);
            let (d, j) = min_with_exclusion(&row, i, 32).unwrap();
            assert!((mp.distances[i] - d).abs() < 1e-7);
            assert_eq!(mp.indices[i], Some(j));
        }
    }

    #[test]
    fn exclusion_minimum() {
        let mut row = vec![10.0; 40];
        row[2] = 0.5;
        row[19] = 1.0;
        row[25] = 1.0;
        assert_eq!(min_with_exclusion(&row, 0, 8).unwrap(), (1.0, 19));
        assert!(matches!(
            min_with_exclusion(&row[..4], 0, 8),
            Err(Error::NoValidNeighbor { .. })
        ));
    }

    #[test]
    fn row_blocks_respect_gaps_and_block_size() {
        let rows: Vec<usize> = vec![0, 1, 2, 200, 201, 1023, 1024, 1025];
        let blocks = row_blocks(&rows);
        assert_eq!(blocks, vec![&[0, 1, 2][..], &[200, 201], &[1023], &[1024, 1025]]);
    }

    #[test]
    fn rejects_short_series_and_constants() {
        let s = ingest(noise(20, 1)).unwrap();
        assert!(matches!(compute_matrix_profile(&s, 16, 3), Err(Error::SeriesTooShort { .. })));
        let c = ingest(vec![3.0; 100]).unwrap();
        assert_eq!(compute_matrix_profile(&c, 10, 3).unwrap_err(), Error::AllConstant(10));
    }
}
