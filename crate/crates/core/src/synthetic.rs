//! Seeded test-series generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Gaussian random walk with unit steps.
pub fn random_walk(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = Normal::new(0.0, 1.0).expect("valid deviation");
    let mut x = 0.0;
    (0..n)
        .map(|_| {
            x += step.sample(&mut rng);
            x
        })
        .collect()
}

/// Independent uniform samples in `[-1, 1)`.
pub fn uniform_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Smooth pattern of length `len`, distinct for each seed.
pub fn pattern(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let (f1, f2) = (rng.random_range(2.0..5.0), rng.random_range(5.0..11.0));
    let (p1, p2) = (rng.random_range(0.0..6.3), rng.random_range(0.0..6.3));
    (0..len)
        .map(|k| {
            let x = k as f64 / len as f64 * std::f64::consts::TAU;
            5.0 * (f1 * x + p1).sin() + 2.5 * (f2 * x + p2).sin()
        })
        .collect()
}

/// Random walk with copies of one pattern written at `offsets`. Each copy gets
/// Gaussian noise of deviation `noise` so that no two copies are identical.
pub fn planted_motif(n: usize, len: usize, offsets: &[usize], noise: f64, seed: u64) -> Vec<f64> {
    let mut v = random_walk(n, seed);
    let pat = pattern(len, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let jitter = Normal::new(0.0, noise.max(f64::MIN_POSITIVE)).expect("valid deviation");
    for &o in offsets {
        let base = v[o];
        for k in 0..len {
            v[o + k] = base + pat[k] + jitter.sample(&mut rng);
        }
        // keep the walk continuous after the copy
        let shift = v[o + len - 1] - v.get(o + len).copied().unwrap_or(0.0);
        for x in v.iter_mut().skip(o + len) {
            *x += shift;
        }
    }
    v
}

/// Noisy sine with one additive spike of height `height` at `at`.
pub fn spike(n: usize, at: usize, height: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n)
        .map(|i| (i as f64 * 0.2).sin() + rng.random_range(-0.01..0.01))
        .collect();
    v[at] += height;
    v
}

/// Samples per day of [`taxi_like`].
pub const TAXI_DAY: usize = 48;

// hourly demand, weekday and weekend
const WEEKDAY: [f64; 24] = [
    14e3, 9e3, 6e3, 4e3, 3e3, 3.5e3, 8e3, 15e3, 19e3, 19e3, 17.5e3, 17.5e3, 18e3, 18e3, 18.5e3,
    18e3, 16.5e3, 20e3, 25e3, 27e3, 25e3, 23e3, 22e3, 18e3,
];
const WEEKEND: [f64; 24] = [
    22e3, 19e3, 15e3, 11e3, 7e3, 4e3, 3.5e3, 5e3, 8e3, 12e3, 15e3, 17.5e3, 19e3, 19.5e3, 19.5e3,
    19e3, 18.5e3, 19e3, 20e3, 20e3, 19.5e3, 19.5e3, 20e3, 21e3,
];

/// Half-hourly passenger counts over `days` days starting on a Wednesday,
/// with 1% multiplicative noise. On day `splice_day` the two half-hours
/// starting at 01:00 are counted twice, as when the repeated clock hour of a
/// daylight-saving change is aggregated by local time.
pub fn taxi_like(days: usize, splice_day: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(1.0, 0.01).expect("valid deviation");
    let mut v: Vec<f64> = (0..days * TAXI_DAY)
        .map(|i| {
            let (day, slot) = (i / TAXI_DAY, i % TAXI_DAY);
            // day 3 is a Saturday
            let t = if matches!(day % 7, 3 | 4) { &WEEKEND } else { &WEEKDAY };
            let h = slot / 2;
            let level = if slot % 2 == 0 {
                t[h]
            } else {
                0.5 * (t[h] + t[(h + 1).min(23)])
            };
            level * noise.sample(&mut rng)
        })
        .collect();
    let at = splice_day * TAXI_DAY + 2;
    for x in &mut v[at..at + 2] {
        *x *= 2.0;
    }
    v
}
