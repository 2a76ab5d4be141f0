//! Deterministic ReliefF over every sample: per-feature weights from the
//! absolute value differences to the k nearest hits and misses.

use crate::dataset::Dataset;
use crate::error::FirError;
use crate::numeric::stable_sum;
use crate::Result;

/// ReliefF weights, one per feature, larger meaning more relevant.
///
/// Every sample is visited (no sampling). Neighbors are found by Manhattan
/// distance on min-max-normalized features; exact duplicate rows count as
/// the same observation and never serve as their own neighbors. Distance
/// ties at the k-th neighbor share the remaining weight equally, so the
/// result is independent of row order. Miss contributions carry the
/// standard prior reweighting, which is identically 1 for two classes.
pub fn relieff_weights(ds: &Dataset, k: usize) -> Result<Vec<f64>> {
    if k < 1 {
        return Err(FirError::ShapeError(
            "neighbor count must be >= 1".to_string(),
        ));
    }
    let n = ds.sample_count();
    let d = ds.feature_count();
    let (n0, n1) = ds.class_counts();
    if n0 < k + 1 || n1 < k + 1 {
        return Err(FirError::InsufficientClass(format!(
            "ReliefF with k = {k} needs more than {k} samples per class, got {n0} and {n1}"
        )));
    }

    let ranges: Vec<f64> = (0..d)
        .map(|j| {
            let col = ds.column(j);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &v in &col {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            hi - lo
        })
        .collect();
    let diff = |i: usize, j: usize, f: usize| -> f64 {
        if ranges[f] <= 0.0 {
            0.0
        } else {
            (ds.value(i, f) - ds.value(j, f)).abs() / ranges[f]
        }
    };
    let distance = |i: usize, j: usize| -> f64 { (0..d).map(|f| diff(i, j, f)).sum() };

    let labels = ds.labels();
    let mut per_sample: Vec<Vec<f64>> = vec![Vec::with_capacity(n); d];
    for i in 0..n {
        let mut hits: Vec<(f64, usize)> = Vec::new();
        let mut misses: Vec<(f64, usize)> = Vec::new();
        for j in 0..n {
            if j == i {
                continue;
            }
            let dist = distance(i, j);
            if dist == 0.0 {
                continue; // duplicate observation
            }
            if labels[j] == labels[i] {
                hits.push((dist, j));
            } else {
                misses.push((dist, j));
            }
        }
        let hit_avg = neighbor_average(&hits, k, |j, f| diff(i, j, f), d);
        let miss_avg = neighbor_average(&misses, k, |j, f| diff(i, j, f), d);
        for f in 0..d {
            per_sample[f].push(miss_avg[f] - hit_avg[f]);
        }
    }
    Ok(per_sample
        .into_iter()
        .map(|contrib| stable_sum(contrib) / n as f64)
        .collect())
}

/// Weighted mean per-feature difference to the k nearest candidates, ties
/// at the cutoff distance sharing the leftover weight.
fn neighbor_average<F: Fn(usize, usize) -> f64>(
    candidates: &[(f64, usize)],
    k: usize,
    diff: F,
    d: usize,
) -> Vec<f64> {
    if candidates.is_empty() {
        return vec![0.0; d];
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let used = k.min(sorted.len());
    let cutoff = sorted[used - 1].0;
    let below = sorted.iter().filter(|c| c.0 < cutoff).count();
    let tied = sorted.iter().filter(|c| c.0 == cutoff).count();
    let frac = (used - below) as f64 / tied as f64;

    (0..d)
        .map(|f| {
            let terms = sorted.iter().filter(|c| c.0 <= cutoff).map(|&(dist, j)| {
                let w = if dist < cutoff { 1.0 } else { frac };
                w * diff(j, f)
            });
            stable_sum(terms) / used as f64
        })
        .collect()
}
