use varmine::motif_sets::{check_disjoint, compute_var_length_motif_sets, motif_sets, MotifSetConfig};
use varmine::oracle::range_query;
use varmine::policy;
use varmine::series::ingest;
use varmine::synthetic::planted_motif;

fn greedy(cands: &[(f64, usize)], len: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &(_, j) in cands {
        if out.iter().all(|&m| !policy::is_trivial_match(m, j, len)) {
            out.push(j);
        }
    }
    out.sort_unstable();
    out
}

#[test]
fn top_set_matches_range_query() {
    let offsets = [150, 600, 1050, 1500, 1950];
    let v = planted_motif(2400, 50, &offsets, 0.05, 12);
    let s = ingest(v).unwrap();
    let run = motif_sets(
        &s,
        &MotifSetConfig { lmin: 40, lmax: 50, p: 10, top_k: 10, radius_factor: 4.0, min_frequency: 1 },
    )
    .unwrap();
    let top = &run.sets[0];
    assert_eq!(top.frequency(), 5);
    let want = greedy(&range_query(&s, top.length, top.anchor, top.radius), top.length);
    assert_eq!(top.members, want);
    check_disjoint(&run.sets).unwrap();
}

#[test]
fn larger_radius_only_adds_members() {
    let v = planted_motif(1500, 32, &[100, 500, 900, 1300], 0.3, 4);
    let s = ingest(v).unwrap();
    let base = MotifSetConfig { lmin: 28, lmax: 32, p: 8, top_k: 1, radius_factor: 1.0, min_frequency: 0 };
    let run = motif_sets(&s, &base).unwrap();
    let mut previous: Vec<usize> = Vec::new();
    for d in [1.0, 2.0, 4.0, 8.0] {
        let sets = compute_var_length_motif_sets(&s, run.ranking.pairs(), d).unwrap();
        let members = sets[0].members.clone();
        assert!(previous.iter().all(|m| members.contains(m)), "D = {d}");
        previous = members;
    }
}

#[test]
fn capacity_does_not_change_sets() {
    let v = planted_motif(1800, 40, &[100, 700, 1300], 0.1, 8);
    let s = ingest(v).unwrap();
    let mut cfg = MotifSetConfig { lmin: 30, lmax: 40, p: 3, top_k: 8, radius_factor: 4.0, min_frequency: 0 };
    let a = motif_sets(&s, &cfg).unwrap();
    cfg.p = 20;
    let b = motif_sets(&s, &cfg).unwrap();
    let strip = |sets: &[varmine::MotifSet]| sets.iter().map(|s| (s.length, s.anchor, s.members.clone())).collect::<Vec<_>>();
    assert_eq!(strip(&a.sets), strip(&b.sets));
    assert_eq!(a.valmod.valmp, b.valmod.valmp);
}

#[test]
fn min_frequency_filters_after_search() {
    let v = planted_motif(1500, 32, &[100, 500, 900], 0.1, 6);
    let s = ingest(v).unwrap();
    let run = motif_sets(
        &s,
        &MotifSetConfig { lmin: 28, lmax: 32, p: 5, top_k: 10, radius_factor: 4.0, min_frequency: 3 },
    )
    .unwrap();
    assert!(!run.sets.is_empty());
    assert!(run.sets.iter().all(|s| s.frequency() >= 3));
}
