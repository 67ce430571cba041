//! Variable-length motif pairs. The matrix profile is computed once at the
//! shortest length; every longer length first advances the partial profiles and
//! only recomputes the rows whose answer the stored entries cannot certify.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motif_sets::MotifRanking;
use crate::policy;
use crate::profile::{
    check_length, compute_profile_run, compute_rows, LengthContext, Match, PartialProfile,
};
use crate::series::{pair_distance, DataSeries, WindowStats};

/// Fast distances this close (after normalization) to a decision threshold are
/// recomputed with `pair_distance` before deciding.
pub(crate) const CANONICAL_MARGIN: f64 = 1e-6;
/// Slack applied when a lower bound is compared against an exact distance.
const BOUND_SLACK: f64 = 1e-9;

/// Variable-length matrix profile: per offset, the best length-normalized match seen so far.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Valmp {
    #[serde(with = "crate::serde_float::vec")]
    pub distances: Vec<f64>,
    #[serde(with = "crate::serde_float::vec")]
    pub norm_distances: Vec<f64>,
    pub lengths: Vec<usize>,
    /// `None` while the offset is unpopulated.
    pub indices: Vec<Option<usize>>,
}

impl Valmp {
    pub fn new(count: usize) -> Self {
        Self {
            distances: vec![f64::INFINITY; count],
            norm_distances: vec![f64::INFINITY; count],
            lengths: vec![0; count],
            indices: vec![None; count],
        }
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    #[inline]
    pub fn is_populated(&self, i: usize) -> bool {
        self.indices[i].is_some()
    }

    /// Replaces entry `i` when it is unpopulated or its normalized distance is
    /// strictly larger than the candidate's. Returns whether it changed.
    #[inline]
    pub fn offer(&mut self, i: usize, distance: f64, neighbor: usize, len: usize) -> bool {
        if !distance.is_finite() {
            return false;
        }
        let norm = distance * (1.0 / len as f64).sqrt();
        if self.indices[i].is_none() || self.norm_distances[i] > norm {
            self.distances[i] = distance;
            self.norm_distances[i] = norm;
            self.lengths[i] = len;
            self.indices[i] = Some(neighbor);
            true
        } else {
            false
        }
    }

    /// Merges one length's matrix profile (the first `n_dp` offsets); returns the offsets that improved.
    pub fn update(
        &mut self,
        distances: &[f64],
        indices: &[Option<usize>],
        n_dp: usize,
        len: usize,
    ) -> Vec<usize> {
        let mut changed = Vec::new();
        for i in 0..n_dp.min(distances.len()).min(self.len()) {
            if let Some(j) = indices[i] {
                if self.offer(i, distances[i], j, len) {
                    changed.push(i);
                }
            }
        }
        changed
    }

    /// Smallest normalized entry; ties go to the smaller offset, then the shorter length.
    pub fn top_motif(&self) -> Result<VariableLengthMotif> {
        let mut best: Option<usize> = None;
        for i in 0..self.len() {
            if self.indices[i].is_none() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => self.norm_distances[i]
                    .total_cmp(&self.norm_distances[b])
                    .then(i.cmp(&b))
                    .then(self.lengths[i].cmp(&self.lengths[b]))
                    .is_lt(),
            };
            if better {
                best = Some(i);
            }
        }
        let i = best.ok_or(Error::Unpopulated)?;
        Ok(VariableLengthMotif {
            offset: i,
            neighbor: self.indices[i].expect("populated"),
            length: self.lengths[i],
            distance: self.distances[i],
            norm_distance: self.norm_distances[i],
        })
    }
}

/// Standalone form of [`Valmp::update`].
pub fn update_valmp(
    v: &mut Valmp,
    distances: &[f64],
    indices: &[Option<usize>],
    n_dp: usize,
    len: usize,
) -> Vec<usize> {
    v.update(distances, indices, n_dp, len)
}

/// Standalone form of [`Valmp::top_motif`].
pub fn top_variable_length_motif(v: &Valmp) -> Result<VariableLengthMotif> {
    v.top_motif()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariableLengthMotif {
    pub offset: usize,
    pub neighbor: usize,
    pub length: usize,
    pub distance: f64,
    pub norm_distance: f64,
}

/// Closest pair at one length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthMotif {
    pub length: usize,
    pub offset: usize,
    pub neighbor: usize,
    pub distance: f64,
}

/// Partial-profile repartition at one length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthTrace {
    pub length: usize,
    pub profiles: usize,
    pub valid: usize,
    pub non_valid: usize,
    pub recomputed: usize,
    pub full_recompute: bool,
}

/// Per-offset state after advancing the partial profiles to a new length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileStatus {
    /// Nearest neighbor certified by the stored entries (`None` when there is none).
    Valid(Option<Match>),
    /// Stored entries cannot rule out a closer neighbor below `floor`.
    NonValid { floor: f64, candidate: Option<Match> },
}

/// Outcome of advancing every partial profile by one length.
#[derive(Debug, Clone)]
pub struct SubMp {
    pub length: usize,
    pub status: Vec<ProfileStatus>,
    /// Smallest certified distance (`inf` if none).
    pub min_dist_abs: f64,
    /// Smallest floor among non-valid profiles (`inf` if none).
    pub min_lb_abs: f64,
    /// The certified minimum is below every non-valid floor, so the motif pair is known.
    pub best_certified: bool,
}

impl SubMp {
    pub fn non_valid(&self) -> impl Iterator<Item = usize> + '_ {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, ProfileStatus::NonValid { .. }))
            .map(|(i, _)| i)
    }
}

/// Advances `list` (valid for `new_len - 1`) to `new_len` and classifies every profile.
pub fn compute_sub_mp(
    series: &DataSeries,
    list: &mut Vec<PartialProfile>,
    new_len: usize,
) -> Result<SubMp> {
    let ctx = LengthContext::new(series, new_len)?;
    Ok(sub_mp(&ctx, list))
}

fn sub_mp(ctx: &LengthContext<'_>, list: &mut Vec<PartialProfile>) -> SubMp {
    list.truncate(ctx.count());
    list.par_iter_mut().for_each(|pp| pp.advance(ctx));
    let status: Vec<ProfileStatus> = list
        .par_iter()
        .map(|pp| classify(ctx, pp))
        .collect();
    let mut min_dist_abs = f64::INFINITY;
    let mut min_lb_abs = f64::INFINITY;
    for s in &status {
        match s {
            ProfileStatus::Valid(Some(m)) => min_dist_abs = min_dist_abs.min(m.distance),
            ProfileStatus::Valid(None) => {}
            ProfileStatus::NonValid { floor, .. } => min_lb_abs = min_lb_abs.min(*floor),
        }
    }
    SubMp {
        length: ctx.len,
        status,
        min_dist_abs,
        min_lb_abs,
        best_certified: min_dist_abs < min_lb_abs,
    }
}

fn classify(ctx: &LengthContext<'_>, pp: &PartialProfile) -> ProfileStatus {
    let i = pp.owner;
    if ctx.cur.is_constant(i) {
        return ProfileStatus::Valid(None);
    }
    let floor = pp.max_lb(ctx.cur.std[i]).unwrap_or(0.0);
    let nearest = pp.nearest();
    if floor == f64::INFINITY {
        return ProfileStatus::Valid(nearest);
    }
    match nearest {
        Some(m) if m.distance < floor => ProfileStatus::Valid(Some(m)),
        candidate => ProfileStatus::NonValid { floor, candidate },
    }
}

/// Run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValmodConfig {
    pub lmin: usize,
    pub lmax: usize,
    pub p: usize,
}

/// Everything a run produces besides the profile itself.
#[derive(Debug, Clone)]
pub struct ValmodRun {
    pub valmp: Valmp,
    pub motifs: Vec<LengthMotif>,
    pub trace: Vec<LengthTrace>,
}

pub(crate) fn check_range(series: &DataSeries, lmin: usize, lmax: usize, p: usize) -> Result<()> {
    if lmin > lmax {
        return Err(Error::InvalidParameters(format!(
            "lmin ({lmin}) must not exceed lmax ({lmax})"
        )));
    }
    if p == 0 {
        return Err(Error::InvalidParameters("capacity p must be at least 1".into()));
    }
    check_length(series, lmin)?;
    check_length(series, lmax)
}

/// Variable-length matrix profile over `[lmin, lmax]`.
pub fn valmod(series: &DataSeries, lmin: usize, lmax: usize, p: usize) -> Result<Valmp> {
    Ok(valmod_run(series, &ValmodConfig { lmin, lmax, p }, None)?.valmp)
}

/// Full run: profile, per-length motif pairs and pruning trace. When `ranking`
/// is given, every improving pair is offered to it along with the partial
/// profiles of both members.
pub fn valmod_run(
    series: &DataSeries,
    cfg: &ValmodConfig,
    mut ranking: Option<&mut MotifRanking>,
) -> Result<ValmodRun> {
    check_range(series, cfg.lmin, cfg.lmax, cfg.p)?;
    let n = series.len();
    let threshold = policy::recompute_threshold(n, cfg.p);

    let first = compute_profile_run(series, cfg.lmin, cfg.p, 0)?;
    let mut valmp = Valmp::new(first.profile.len());
    let mut list = first.partials;
    let mut motifs = Vec::new();
    let mut trace = Vec::new();

    let stats = WindowStats::new(series, cfg.lmin)?;
    let exact: Vec<Option<Match>> = first
        .profile
        .distances
        .iter()
        .zip(&first.profile.indices)
        .map(|(&d, idx)| idx.map(|j| Match { distance: d, neighbor: j }))
        .collect();
    trace.push(LengthTrace {
        length: cfg.lmin,
        profiles: exact.len(),
        valid: 0,
        non_valid: exact.len(),
        recomputed: exact.len(),
        full_recompute: true,
    });
    commit_length(series, &stats, &exact, &mut valmp, &mut motifs, &list, ranking.as_deref_mut());

    for len in cfg.lmin + 1..=cfg.lmax {
        let ctx = LengthContext::new(series, len)?;
        let sub = sub_mp(&ctx, &mut list);
        let count = ctx.count();
        let inv_sqrt = (1.0 / len as f64).sqrt();

        let mut exact: Vec<Option<Match>> = vec![None; count];
        let mut pending = Vec::new();
        let mut valid = 0;
        for (i, s) in sub.status.iter().enumerate() {
            match *s {
                ProfileStatus::Valid(m) => {
                    valid += 1;
                    exact[i] = m;
                }
                ProfileStatus::NonValid { floor, .. } => {
                    let needed = floor <= sub.min_dist_abs + BOUND_SLACK
                        || floor * inv_sqrt < valmp.norm_distances[i] + BOUND_SLACK
                        || !valmp.is_populated(i);
                    if needed {
                        pending.push(i);
                    }
                }
            }
        }
        let non_valid = count - valid;

        let full = !pending.is_empty() && pending.len() as f64 >= threshold;
        let recomputed = if full {
            let run = compute_profile_run(series, len, cfg.p, 0)?;
            list = run.partials;
            for (i, slot) in exact.iter_mut().enumerate() {
                *slot = run.profile.indices[i].map(|j| Match {
                    distance: run.profile.distances[i],
                    neighbor: j,
                });
            }
            count
        } else if !pending.is_empty() {
            for r in compute_rows(&ctx, &pending, cfg.p, 0) {
                let i = r.partial.owner;
                exact[i] = r.best;
                list[i] = r.partial;
            }
            pending.len()
        } else {
            0
        };

        trace.push(LengthTrace {
            length: len,
            profiles: count,
            valid: if full { 0 } else { valid },
            non_valid: if full { count } else { non_valid },
            recomputed,
            full_recompute: full,
        });
        commit_length(series, &ctx.cur, &exact, &mut valmp, &mut motifs, &list, ranking.as_deref_mut());
    }

    Ok(ValmodRun {
        valmp,
        motifs,
        trace,
    })
}

/// Records the closest pair of one length and merges the known nearest
/// neighbors into `valmp`, using canonical distances near every decision.
fn commit_length(
    series: &DataSeries,
    stats: &WindowStats,
    exact: &[Option<Match>],
    valmp: &mut Valmp,
    motifs: &mut Vec<LengthMotif>,
    list: &[PartialProfile],
    ranking: Option<&mut MotifRanking>,
) {
    let len = stats.len;
    let inv_sqrt = (1.0 / len as f64).sqrt();

    let fast_min = exact
        .iter()
        .flatten()
        .map(|m| m.distance)
        .fold(f64::INFINITY, f64::min);
    if fast_min.is_finite() {
        let cutoff = fast_min + CANONICAL_MARGIN * (1.0 + fast_min);
        let best = exact
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.filter(|m| m.distance <= cutoff).map(|m| (i, m.neighbor)))
            .map(|(i, j)| (pair_distance(series, stats, i, j), i, j))
            .min_by(|a, b| policy::cmp_candidates((a.0, a.1), (b.0, b.1)));
        if let Some((d, i, j)) = best {
            motifs.push(LengthMotif {
                length: len,
                offset: i,
                neighbor: j,
                distance: d,
            });
        }
    }

    let mut improved = Vec::new();
    for (i, m) in exact.iter().enumerate() {
        let Some(m) = m else { continue };
        if valmp.is_populated(i)
            && m.distance * inv_sqrt >= valmp.norm_distances[i] + CANONICAL_MARGIN
        {
            continue;
        }
        let d = pair_distance(series, stats, i, m.neighbor);
        if valmp.offer(i, d, m.neighbor, len) {
            improved.push(i);
        }
    }

    if let Some(ranking) = ranking {
        for &i in &improved {
            ranking.offer(i, valmp.indices[i].expect("populated"), len, valmp.distances[i]);
        }
        ranking.attach_profiles(len, list);
    }
}
