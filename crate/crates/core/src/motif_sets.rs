//! Variable-length motif sets: the best `K` motif pairs across lengths, each
//! grown into the set of windows within `D` times the pair distance.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policy;
use crate::profile::PartialProfile;
use crate::profile::distance_profile;
use crate::series::{DataSeries, WindowStats};
use crate::valmod::{valmod_run, Valmp, ValmodConfig, ValmodRun};

/// A motif pair in the Top-K ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPair {
    pub off1: usize,
    pub off2: usize,
    pub length: usize,
    pub distance: f64,
    pub norm_distance: f64,
    /// Partial profiles of `off1` and `off2` at `length`, attached once the pair is ranked.
    pub profiles: Option<Box<(PartialProfile, PartialProfile)>>,
}

/// Bounded ranking of motif pairs by normalized distance (then first offset, then length).
#[derive(Debug, Clone, Default)]
pub struct MotifRanking {
    capacity: usize,
    pairs: Vec<RankedPair>,
}

impl MotifRanking {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            pairs: Vec::with_capacity(capacity + 1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn pairs(&self) -> &[RankedPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn key(p: &RankedPair) -> (f64, usize, usize) {
        (p.norm_distance, p.off1, p.length)
    }

    fn cmp_keys(a: (f64, usize, usize), b: (f64, usize, usize)) -> std::cmp::Ordering {
        a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
    }

    /// Offers the pair `(i, j)` at `len`. Returns whether it entered the ranking.
    pub fn offer(&mut self, i: usize, j: usize, len: usize, distance: f64) -> bool {
        if self.capacity == 0 || !distance.is_finite() {
            return false;
        }
        let (off1, off2) = (i.min(j), i.max(j));
        if self
            .pairs
            .iter()
            .any(|p| p.off1 == off1 && p.off2 == off2 && p.length == len)
        {
            return false;
        }
        let pair = RankedPair {
            off1,
            off2,
            length: len,
            distance,
            norm_distance: distance * (1.0 / len as f64).sqrt(),
            profiles: None,
        };
        let key = Self::key(&pair);
        if self.pairs.len() == self.capacity {
            let worst = Self::key(self.pairs.last().expect("full ranking"));
            if Self::cmp_keys(key, worst).is_ge() {
                return false;
            }
            // evicted pairs drop their profiles with them
            self.pairs.pop();
        }
        let pos = self
            .pairs
            .partition_point(|p| Self::cmp_keys(Self::key(p), key).is_lt());
        self.pairs.insert(pos, pair);
        true
    }

    /// Attaches the partial profiles of both members to every ranked pair of `len` that has none.
    pub fn attach_profiles(&mut self, len: usize, list: &[PartialProfile]) {
        for p in self.pairs.iter_mut().filter(|p| p.length == len && p.profiles.is_none()) {
            if let (Some(a), Some(b)) = (list.get(p.off1), list.get(p.off2)) {
                if a.length == len && b.length == len {
                    p.profiles = Some(Box::new((a.clone(), b.clone())));
                }
            }
        }
    }
}

/// Merges one length's matrix profile into `valmp` and offers every improving pair to `ranking`.
pub fn update_valmp_for_motif_sets(
    valmp: &mut Valmp,
    distances: &[f64],
    indices: &[Option<usize>],
    n_dp: usize,
    len: usize,
    list: &[PartialProfile],
    ranking: &mut MotifRanking,
) -> Vec<usize> {
    let improved = valmp.update(distances, indices, n_dp, len);
    for &i in &improved {
        ranking.offer(i, valmp.indices[i].expect("populated"), len, valmp.distances[i]);
    }
    ranking.attach_profiles(len, list);
    improved
}

/// A set of mutually non-trivial windows within `radius` of an anchor pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifSet {
    pub length: usize,
    pub anchor: (usize, usize),
    pub distance: f64,
    pub norm_distance: f64,
    pub radius: f64,
    /// Ascending offsets, anchors included.
    pub members: Vec<usize>,
    /// Whether the range query needed a full distance profile.
    pub recomputed: bool,
}

impl MotifSet {
    pub fn frequency(&self) -> usize {
        self.members.len()
    }
}

/// Neighbors of `anchor` strictly within `radius`, taken from the stored
/// entries when their bound proves nothing else qualifies.
fn range_neighbors(
    series: &DataSeries,
    stats: &WindowStats,
    anchor: usize,
    snapshot: Option<&PartialProfile>,
    radius: f64,
) -> Result<(Vec<(f64, usize)>, bool)> {
    if let Some(pp) = snapshot.filter(|pp| pp.owner == anchor && pp.length == stats.len) {
        if pp.max_lb(stats.std[anchor]).is_some_and(|lb| lb > radius) {
            let hits = pp
                .entries
                .iter()
                .filter(|e| e.dist < radius)
                .map(|e| (e.dist, e.neighbor))
                .collect();
            return Ok((hits, false));
        }
    }
    let row = distance_profile(series, stats, anchor)?;
    let hits = row
        .iter()
        .enumerate()
        .filter(|(_, d)| **d < radius)
        .map(|(j, d)| (*d, j))
        .collect();
    Ok((hits, true))
}

/// Grows every ranked pair into a motif set of radius `D × distance`, in ranking
/// order. Windows already used by an earlier set (same start offset, any length)
/// are excluded, and a pair whose anchor was used is skipped.
pub fn compute_var_length_motif_sets(
    series: &DataSeries,
    ranking: &[RankedPair],
    radius_factor: f64,
) -> Result<Vec<MotifSet>> {
    if !(radius_factor.is_finite() && radius_factor >= 0.0) {
        return Err(Error::InvalidParameters(format!(
            "radius factor must be a non-negative number, got {radius_factor}"
        )));
    }
    let mut stats_by_len: HashMap<usize, WindowStats> = HashMap::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut sets = Vec::new();
    for pair in ranking {
        if used.contains(&pair.off1) || used.contains(&pair.off2) {
            continue;
        }
        let len = pair.length;
        let stats = match stats_by_len.entry(len) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(WindowStats::new(series, len)?),
        };
        let stats = &*stats;
        let radius = pair.distance * radius_factor;
        let (snap1, snap2) = match &pair.profiles {
            Some(b) => (Some(&b.0), Some(&b.1)),
            None => (None, None),
        };
        let (mut cands, r1) = range_neighbors(series, stats, pair.off1, snap1, radius)?;
        let (more, r2) = range_neighbors(series, stats, pair.off2, snap2, radius)?;
        cands.extend(more);
        cands.push((0.0, pair.off1));
        cands.push((0.0, pair.off2));
        cands.sort_by(|a, b| policy::cmp_candidates(*a, *b));

        let mut members: Vec<usize> = vec![pair.off1, pair.off2];
        for &(_, j) in &cands {
            if used.contains(&j)
                || members.iter().any(|&m| policy::is_trivial_match(m, j, len))
            {
                continue;
            }
            members.push(j);
        }
        members.sort_unstable();
        used.extend(members.iter().copied());
        sets.push(MotifSet {
            length: len,
            anchor: (pair.off1, pair.off2),
            distance: pair.distance,
            norm_distance: pair.norm_distance,
            radius,
            members,
            recomputed: r1 || r2,
        });
    }
    Ok(sets)
}

/// Checks the output contract: no offset in two sets, no trivial matches inside a set.
pub fn check_disjoint(sets: &[MotifSet]) -> std::result::Result<(), String> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (k, set) in sets.iter().enumerate() {
        for (a, &x) in set.members.iter().enumerate() {
            if let Some(prev) = seen.insert(x, k) {
                return Err(format!("offset {x} belongs to sets {prev} and {k}"));
            }
            for &y in &set.members[a + 1..] {
                if policy::is_trivial_match(x, y, set.length) {
                    return Err(format!(
                        "set {k} holds trivially matching offsets {x} and {y} at length {}",
                        set.length
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Parameters of a motif-set search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotifSetConfig {
    pub lmin: usize,
    pub lmax: usize,
    pub p: usize,
    pub top_k: usize,
    pub radius_factor: f64,
    /// Sets with fewer members are dropped after the search.
    pub min_frequency: usize,
}

#[derive(Debug, Clone)]
pub struct MotifSetRun {
    pub sets: Vec<MotifSet>,
    pub ranking: MotifRanking,
    pub valmod: ValmodRun,
}

/// Top-K variable-length motif pairs over `[lmin, lmax]` grown into disjoint motif sets.
pub fn motif_sets(series: &DataSeries, cfg: &MotifSetConfig) -> Result<MotifSetRun> {
    if cfg.top_k == 0 {
        return Err(Error::InvalidParameters("top-k must be at least 1".into()));
    }
    let mut ranking = MotifRanking::new(cfg.top_k);
    let run = valmod_run(
        series,
        &ValmodConfig {
            lmin: cfg.lmin,
            lmax: cfg.lmax,
            p: cfg.p,
        },
        Some(&mut ranking),
    )?;
    let mut sets = compute_var_length_motif_sets(series, ranking.pairs(), cfg.radius_factor)?;
    sets.retain(|s| s.frequency() >= cfg.min_frequency);
    Ok(MotifSetRun {
        sets,
        ranking,
        valmod: run,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ingest;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cluster_series(n: usize, offsets: &[usize], len: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = 0.0;
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                x += rng.random_range(-1.0..1.0);
                x
            })
            .collect();
        let pattern: Vec<f64> = (0..len).map(|k| (k as f64 * 0.3).sin() * 5.0 + (k as f64 * 0.07).cos() * 3.0).collect();
        for &o in offsets {
            for k in 0..len {
                v[o + k] = pattern[k] + rng.random_range(-0.05..0.05);
            }
        }
        v
    }

    #[test]
    fn ranking_is_bounded_and_sorted() {
        let mut r = MotifRanking::new(2);
        assert!(r.offer(5, 1, 16, 4.0));
        assert!(!r.offer(1, 5, 16, 4.0));
        assert!(r.offer(7, 30, 16, 2.0));
        assert!(r.offer(9, 40, 64, 4.0));
        assert_eq!(r.len(), 2);
        assert_eq!((r.pairs()[0].off1, r.pairs()[1].off1), (7, 9));
        assert!(!r.offer(2, 20, 4, 5.0));
    }

    #[test]
    fn planted_cluster_forms_one_set() {
        let offsets = [100, 400, 700, 1000, 1300];
        let v = cluster_series(1600, &offsets, 40, 2);
        let s = ingest(v).unwrap();
        let run = motif_sets(
            &s,
            &MotifSetConfig {
                lmin: 36,
                lmax: 40,
                p: 10,
                top_k: 10,
                radius_factor: 4.0,
                min_frequency: 1,
            },
        )
        .unwrap();
        let top = &run.sets[0];
        assert_eq!(top.members, offsets.to_vec());
        check_disjoint(&run.sets).unwrap();
    }

    #[test]
    fn tiny_radius_leaves_anchor_pairs() {
        let v = cluster_series(900, &[50, 450], 30, 5);
        let s = ingest(v).unwrap();
        let run = motif_sets(
            &s,
            &MotifSetConfig {
                lmin: 20,
                lmax: 24,
                p: 5,
                top_k: 5,
                radius_factor: 0.5,
                min_frequency: 0,
            },
        )
        .unwrap();
        assert!(run.sets.iter().all(|s| s.frequency() == 2));
        check_disjoint(&run.sets).unwrap();
    }

    #[test]
    fn lint_reports_overlap() {
        let a = MotifSet {
            length: 10,
            anchor: (0, 20),
            distance: 1.0,
            norm_distance: 0.3,
            radius: 4.0,
            members: vec![0, 20],
            recomputed: false,
        };
        let mut b = a.clone();
        b.members = vec![20, 40];
        assert!(check_disjoint(&[a.clone(), b]).is_err());
        let mut c = a.clone();
        c.members = vec![0, 3];
        assert!(check_disjoint(&[c]).is_err());
        assert!(check_disjoint(&[a]).is_ok());
    }
}
