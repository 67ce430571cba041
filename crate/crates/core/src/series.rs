//! Raw series storage, O(1) window statistics, sliding dot products and the
//! dot-product form of the z-normalized Euclidean distance.
//!
//! Offsets are 0-based throughout the crate.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::policy;

/// An immutable, finite-valued data series with prefix sums for window statistics.
#[derive(Clone)]
pub struct DataSeries {
    values: Vec<f64>,
    prefix: Vec<f64>,
    prefix_sq: Vec<f64>,
    /// `run[i]`: number of consecutive values equal to `values[i]` starting at `i`.
    run: Vec<usize>,
    max_abs: f64,
    spectrum: OnceLock<Spectrum>,
}

impl fmt::Debug for DataSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DataSeries")
            .field("n", &self.values.len())
            .field("max_abs", &self.max_abs)
            .finish()
    }
}

/// Validates `raw` and builds a [`DataSeries`].
pub fn ingest(raw: impl Into<Vec<f64>>) -> Result<DataSeries> {
    DataSeries::new(raw.into())
}

impl DataSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos + 1));
        }
        let n = values.len();
        let mut prefix = Vec::with_capacity(n + 1);
        let mut prefix_sq = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        prefix_sq.push(0.0);
        let (mut s, mut ss) = (0.0, 0.0);
        for &v in &values {
            s += v;
            ss += v * v;
            prefix.push(s);
            prefix_sq.push(ss);
        }
        let mut run = vec![1usize; n];
        for i in (0..n - 1).rev() {
            if values[i] == values[i + 1] {
                run[i] = run[i + 1] + 1;
            }
        }
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self {
            values,
            prefix,
            prefix_sq,
            run,
            max_abs,
            spectrum: OnceLock::new(),
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Running sums `[t1, t1+t2, ...]`.
    pub fn cumsum(&self) -> &[f64] {
        &self.prefix[1..]
    }

    /// Running squared sums `[t1², t1²+t2², ...]`.
    pub fn cumsum_sq(&self) -> &[f64] {
        &self.prefix_sq[1..]
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    /// Standard deviation below which a window is treated as constant.
    pub fn zero_variance_threshold(&self) -> f64 {
        policy::zero_variance_threshold(self.max_abs)
    }

    /// Number of windows of length `len`.
    #[inline]
    pub fn window_count(&self, len: usize) -> usize {
        policy::window_count(self.len(), len)
    }

    pub fn window(&self, offset: usize, len: usize) -> Result<&[f64]> {
        self.check_window(offset, len)?;
        Ok(&self.values[offset..offset + len])
    }

    fn check_window(&self, offset: usize, len: usize) -> Result<()> {
        if len == 0 || offset + len > self.len() {
            return Err(Error::OutOfRange {
                offset,
                length: len,
                n: self.len(),
            });
        }
        Ok(())
    }

    /// True when every value of the window is identical.
    #[inline]
    pub fn is_flat(&self, offset: usize, len: usize) -> bool {
        self.run[offset] >= len
    }

    /// Mean and standard deviation of `T[offset..offset+len]` in O(1).
    pub fn stats(&self, offset: usize, len: usize) -> Result<SubseqStats> {
        self.check_window(offset, len)?;
        let (sum, sq_sum, mean, std) = self.raw_stats(offset, len);
        let constant = std < self.zero_variance_threshold();
        Ok(SubseqStats {
            offset,
            length: len,
            sum,
            sq_sum,
            mean,
            std: if constant { 0.0 } else { std },
            constant,
        })
    }

    #[inline]
    fn raw_stats(&self, offset: usize, len: usize) -> (f64, f64, f64, f64) {
        let sum = self.prefix[offset + len] - self.prefix[offset];
        let sq_sum = self.prefix_sq[offset + len] - self.prefix_sq[offset];
        let l = len as f64;
        let mean = sum / l;
        let std = if self.is_flat(offset, len) {
            0.0
        } else {
            (sq_sum / l - mean * mean).max(0.0).sqrt()
        };
        (sum, sq_sum, mean, std)
    }

    fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| Spectrum::new(&self.values))
    }
}

/// Statistics of one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubseqStats {
    pub offset: usize,
    pub length: usize,
    pub sum: f64,
    pub sq_sum: f64,
    pub mean: f64,
    /// Zero when the window is constant.
    pub std: f64,
    pub constant: bool,
}

/// Per-offset means and standard deviations for every window of one length.
#[derive(Debug, Clone)]
pub struct WindowStats {
    pub len: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// `1 / std`, or 0 for constant windows.
    pub inv_std: Vec<f64>,
}

impl WindowStats {
    pub fn new(series: &DataSeries, len: usize) -> Result<Self> {
        let count = series.window_count(len);
        if count == 0 {
            return Err(Error::LengthExceedsSeries {
                length: len,
                n: series.len(),
            });
        }
        let threshold = series.zero_variance_threshold();
        let mut mean = Vec::with_capacity(count);
        let mut std = Vec::with_capacity(count);
        let mut inv_std = Vec::with_capacity(count);
        for i in 0..count {
            let (_, _, mu, sigma) = series.raw_stats(i, len);
            mean.push(mu);
            if sigma < threshold {
                std.push(0.0);
                inv_std.push(0.0);
            } else {
                std.push(sigma);
                inv_std.push(1.0 / sigma);
            }
        }
        Ok(Self {
            len,
            mean,
            std,
            inv_std,
        })
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.mean.len()
    }

    #[inline]
    pub fn is_constant(&self, i: usize) -> bool {
        self.inv_std[i] == 0.0
    }

    pub fn get(&self, series: &DataSeries, i: usize) -> SubseqStats {
        let (sum, sq_sum, _, _) = series.raw_stats(i, self.len);
        SubseqStats {
            offset: i,
            length: self.len,
            sum,
            sq_sum,
            mean: self.mean[i],
            std: self.std[i],
            constant: self.is_constant(i),
        }
    }

    /// Number of non-constant windows.
    pub fn non_constant(&self) -> usize {
        self.inv_std.iter().filter(|v| **v != 0.0).count()
    }
}

/// Cached forward transform of the series, reused by every query convolution.
#[derive(Clone)]
struct Spectrum {
    size: usize,
    data: Vec<Complex<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectrum {
    fn new(values: &[f64]) -> Self {
        let size = values.len().next_power_of_two().max(2);
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let mut data: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        data.resize(size, Complex::new(0.0, 0.0));
        forward.process(&mut data);
        Self {
            size,
            data,
            forward,
            inverse,
        }
    }
}

/// Dot products of `query` against every window of `series` of the same length,
/// computed by frequency-domain convolution in O(n log n).
pub fn sliding_dot_product(query: &[f64], series: &DataSeries) -> Result<Vec<f64>> {
    let len = query.len();
    let n = series.len();
    if len == 0 || len > n {
        return Err(Error::LengthExceedsSeries { length: len, n });
    }
    let spectrum = series.spectrum();
    let mut buf = vec![Complex::new(0.0, 0.0); spectrum.size];
    for (k, &q) in query.iter().rev().enumerate() {
        buf[k] = Complex::new(q, 0.0);
    }
    spectrum.forward.process(&mut buf);
    for (b, s) in buf.iter_mut().zip(&spectrum.data) {
        *b *= s;
    }
    spectrum.inverse.process(&mut buf);
    let scale = 1.0 / spectrum.size as f64;
    Ok(buf[len - 1..n].iter().map(|c| c.re * scale).collect())
}

/// Plain sequential dot product.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Turns the dot-product vector of query offset `offset - 1` into the one of
/// `offset`, in place and in O(n). Offset 0 leaves `qt` unchanged.
pub fn advance_dot_products(
    qt: &mut [f64],
    series: &DataSeries,
    offset: usize,
    len: usize,
) -> Result<()> {
    let count = series.window_count(len);
    if count == 0 {
        return Err(Error::LengthExceedsSeries {
            length: len,
            n: series.len(),
        });
    }
    if offset >= count || qt.len() != count {
        return Err(Error::OutOfRange {
            offset,
            length: len,
            n: series.len(),
        });
    }
    if offset == 0 {
        return Ok(());
    }
    let t = series.values();
    let head = t[offset - 1];
    let tail = t[offset + len - 1];
    for j in (1..count).rev() {
        qt[j] = qt[j - 1] - t[j - 1] * head + t[j + len - 1] * tail;
    }
    qt[0] = dot(&t[offset..offset + len], &t[..len]);
    Ok(())
}

/// Extends the dot product of windows `i` and `j` from length `len` to `len + 1`.
pub fn extend_dot_product(
    qt: f64,
    series: &DataSeries,
    i: usize,
    j: usize,
    len: usize,
) -> Result<f64> {
    let n = series.len();
    for offset in [i, j] {
        if offset + len >= n {
            return Err(Error::OutOfRange {
                offset,
                length: len + 1,
                n,
            });
        }
    }
    let t = series.values();
    Ok(qt + t[i + len] * t[j + len])
}

/// Distance implied by a correlation `q` between two windows of length `len`.
#[inline]
pub fn distance_from_correlation(q: f64, len: usize) -> f64 {
    (2.0 * len as f64 * (1.0 - q)).max(0.0).sqrt()
}

/// Z-normalized Euclidean distance from a dot product and the two windows' statistics.
pub fn znorm_distance(qt: f64, a: &SubseqStats, b: &SubseqStats) -> Result<f64> {
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
    let corr = (qt - l * a.mean * b.mean) / (l * a.std * b.std);
    Ok(distance_from_correlation(corr, a.length))
}

/// Distance between windows `i` and `j` computed from a direct dot product.
///
/// Depends only on the unordered pair and `len`, so every code path that reports a distance
/// through it yields bit-identical values.
pub fn pair_distance(series: &DataSeries, stats: &WindowStats, i: usize, j: usize) -> f64 {
    let len = stats.len;
    if stats.is_constant(i) || stats.is_constant(j) {
        return f64::INFINITY;
    }
    // fixed operand order keeps the result symmetric to the last bit
    let (i, j) = (i.min(j), i.max(j));
    let t = series.values();
    let qt = dot(&t[i..i + len], &t[j..j + len]);
    let l = len as f64;
    let corr = (qt - l * stats.mean[i] * stats.mean[j]) * (stats.inv_std[i] * stats.inv_std[j] / l);
    distance_from_correlation(corr, len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_series(n: usize, seed: u64) -> DataSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DataSeries::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    }

    fn naive_dot_products(query: &[f64], t: &[f64]) -> Vec<f64> {
        (0..=t.len() - query.len())
            .map(|j| {
                let mut s = 0.0;
                for p in 0..query.len() {
                    s += query[p] * t[j + p];
                }
                s
            })
            .collect()
    }

    fn explicit_znorm(a: &[f64], b: &[f64]) -> f64 {
        let norm = |w: &[f64]| {
            let mu = w.iter().sum::<f64>() / w.len() as f64;
            let sd = (w.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / w.len() as f64).sqrt();
            w.iter().map(|x| (x - mu) / sd).collect::<Vec<_>>()
        };
        let (za, zb) = (norm(a), norm(b));
        za.iter().zip(&zb).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
    }

    #[test]
    fn ingest_builds_prefix_sums() {
        let s = ingest(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.cumsum(), &[1.0, 3.0, 6.0]);
        assert_eq!(s.cumsum_sq(), &[1.0, 5.0, 14.0]);
    }

    #[test]
    fn ingest_rejects_bad_input() {
        assert_eq!(ingest(vec![1.0, f64::NAN]).unwrap_err(), Error::NonFinite(2));
        assert_eq!(ingest(vec![f64::INFINITY]).unwrap_err(), Error::NonFinite(1));
        assert_eq!(ingest(Vec::<f64>::new()).unwrap_err(), Error::Empty);
    }

    #[test]
    fn ingest_handles_a_million_points() {
        let s = ingest((0..1_000_000).map(|i| (i as f64 * 0.001).sin()).collect::<Vec<_>>()).unwrap();
        assert_eq!(s.len(), 1_000_000);
    }

    #[test]
    fn stats_match_definition() {
        let s = random_series(200, 3);
        let st = s.stats(17, 40).unwrap();
        let w = s.window(17, 40).unwrap();
        let mu = w.iter().sum::<f64>() / 40.0;
        let sd = (w.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / 40.0).sqrt();
        assert!((st.mean - mu).abs() < 1e-12);
        assert!((st.std - sd).abs() < 1e-12);
        assert!(!st.constant);
    }

    #[test]
    fn flat_windows_are_constant() {
        let mut v = vec![300.0; 50];
        v.extend((0..50).map(|i| i as f64));
        let s = DataSeries::new(v).unwrap();
        let st = s.stats(3, 20).unwrap();
        assert!(st.constant);
        assert_eq!(st.std, 0.0);
        let ws = WindowStats::new(&s, 20).unwrap();
        assert!(ws.is_constant(30));
        assert!(!ws.is_constant(31));
    }

    #[test]
    fn sliding_dot_product_small() {
        let s = ingest(vec![1.0, 2.0, 3.0]).unwrap();
        let qt = sliding_dot_product(&[1.0, 1.0], &s).unwrap();
        assert!((qt[0] - 3.0).abs() < 1e-12 && (qt[1] - 5.0).abs() < 1e-12);
        assert!(matches!(
            sliding_dot_product(&[1.0; 4], &s),
            Err(Error::LengthExceedsSeries { .. })
        ));
    }

    #[test]
    fn sliding_dot_product_matches_naive() {
        let s = random_series(512, 11);
        let q = s.window(100, 32).unwrap().to_vec();
        let fast = sliding_dot_product(&q, &s).unwrap();
        let slow = naive_dot_products(&q, s.values());
        assert_eq!(fast.len(), 512 - 32 + 1);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-9);
        }
        let first = s.window(0, 32).unwrap();
        let qt0 = sliding_dot_product(first, &s).unwrap();
        assert!((qt0[0] - s.stats(0, 32).unwrap().sq_sum).abs() < 1e-9);
    }

    #[test]
    fn advance_matches_scratch() {
        let s = random_series(256, 5);
        let len = 20;
        let mut qt = sliding_dot_product(s.window(0, len).unwrap(), &s).unwrap();
        let before = qt.clone();
        advance_dot_products(&mut qt, &s, 0, len).unwrap();
        assert_eq!(qt, before);
        for i in 1..60 {
            advance_dot_products(&mut qt, &s, i, len).unwrap();
            let scratch = naive_dot_products(s.window(i, len).unwrap(), s.values());
            for (a, b) in qt.iter().zip(&scratch) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn advance_on_constant_series() {
        let c = 1.5;
        let s = ingest(vec![c; 64]).unwrap();
        let len = 8;
        let mut qt = sliding_dot_product(s.window(0, len).unwrap(), &s).unwrap();
        for i in 1..20 {
            advance_dot_products(&mut qt, &s, i, len).unwrap();
            for v in &qt {
                assert!((v - len as f64 * c * c).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn extend_dot_product_cases() {
        let s = ingest(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(extend_dot_product(3.0, &s, 0, 0, 2).unwrap(), 12.0);
        assert!(matches!(
            extend_dot_product(3.0, &s, 1, 0, 2),
            Err(Error::OutOfRange { .. })
        ));
        let r = random_series(256, 8);
        let (i, j, len) = (10, 90, 31);
        let qt = dot(r.window(i, len).unwrap(), r.window(j, len).unwrap());
        let ext = extend_dot_product(qt, &r, i, j, len).unwrap();
        let scratch = dot(r.window(i, len + 1).unwrap(), r.window(j, len + 1).unwrap());
        assert!((ext - scratch).abs() < 1e-12);
    }

    #[test]
    fn znorm_distance_extremes() {
        let s = ingest(vec![1.0, 3.0, 2.0, 5.0, 1.0, 3.0, 2.0, 5.0, -1.0, -3.0, -2.0, -5.0]).unwrap();
        let a = s.stats(0, 4).unwrap();
        let b = s.stats(4, 4).unwrap();
        let c = s.stats(8, 4).unwrap();
        let t = s.values();
        let same = znorm_distance(dot(&t[0..4], &t[4..8]), &a, &b).unwrap();
        assert!(same.abs() < 1e-6);
        let anti = znorm_distance(dot(&t[0..4], &t[8..12]), &a, &c).unwrap();
        assert!((anti - 4.0).abs() < 1e-9);
        let flat = ingest(vec![2.0; 8]).unwrap();
        let f = flat.stats(0, 4).unwrap();
        assert_eq!(znorm_distance(16.0, &f, &f), Err(Error::ZeroVariance));
    }

    #[test]
    fn znorm_distance_matches_explicit() {
        let s = random_series(400, 21);
        let len = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let i = rng.random_range(0..s.window_count(len));
            let j = rng.random_range(0..s.window_count(len));
            let (wi, wj) = (s.window(i, len).unwrap(), s.window(j, len).unwrap());
            let d = znorm_distance(dot(wi, wj), &s.stats(i, len).unwrap(), &s.stats(j, len).unwrap())
                .unwrap();
            let e = explicit_znorm(wi, wj);
            assert!((d - e).abs() <= 1e-9 * e.max(1.0), "{d} vs {e}");
        }
    }

    #[test]
    fn pair_distance_agrees_with_znorm_distance() {
        let s = random_series(300, 2);
        let ws = WindowStats::new(&s, 24).unwrap();
        let t = s.values();
        let d = pair_distance(&s, &ws, 5, 200);
        let e = znorm_distance(
            dot(&t[5..29], &t[200..224]),
            &s.stats(5, 24).unwrap(),
            &s.stats(200, 24).unwrap(),
        )
        .unwrap();
        assert!((d - e).abs() < 1e-12);
    }
}
