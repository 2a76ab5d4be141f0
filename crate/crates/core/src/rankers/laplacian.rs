//! Laplacian score: locality preservation over a heat-kernel kNN sample
//! graph. Smaller scores mean the feature better respects the graph
//! structure, so the dispatcher ranks this method ascending.

use crate::dataset::Dataset;
use crate::error::FirError;
use crate::numeric::{mean_and_pop_var, stable_sum, EPSILON};
use crate::Result;

/// Per-feature Laplacian scores L_r = f~' L f~ / (f~' D f~ + eps) on the
/// union-symmetrized kNN graph of the z-scored samples. `t` is the heat
/// kernel bandwidth; `None` uses the mean squared pairwise distance.
/// Constant features are assigned +inf so the ascending rank puts them
/// last.
pub fn laplacian_scores(ds: &Dataset, k: usize, t: Option<f64>) -> Result<Vec<f64>> {
    let n = ds.sample_count();
    let d = ds.feature_count();
    if k < 1 {
        return Err(FirError::ShapeError("graph size must be >= 1".to_string()));
    }
    if n <= k {
        return Err(FirError::InsufficientSamples {
            needed: k + 1,
            got: n,
        });
    }

    // z-score each feature; constant features become all-zero columns
    let zcols: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let col = ds.column(j);
            let (m, v) = mean_and_pop_var(&col);
            let s = v.sqrt().max(EPSILON);
            col.iter().map(|&x| (x - m) / s).collect()
        })
        .collect();

    let mut d2 = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist: f64 = zcols
                .iter()
                .map(|col| {
                    let diff = col[i] - col[j];
                    diff * diff
                })
                .sum();
            d2[i * n + j] = dist;
            d2[j * n + i] = dist;
        }
    }

    let bandwidth = match t {
        Some(t) if t > 0.0 => t,
        Some(_) => {
            return Err(FirError::ShapeError(
                "bandwidth must be positive".to_string(),
            ))
        }
        None => {
            let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
            let mean = stable_sum(pairs.map(|(i, j)| d2[i * n + j])) / (n * (n - 1) / 2) as f64;
            if mean > 0.0 {
                mean
            } else {
                1.0
            }
        }
    };

    // kNN with all distance ties at the cutoff included, so edges do not
    // depend on row order
    let mut is_neighbor = vec![false; n * n];
    for i in 0..n {
        let mut dists: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| d2[i * n + j]).collect();
        dists.sort_by(f64::total_cmp);
        let cutoff = dists[k - 1];
        for j in 0..n {
            if j != i && d2[i * n + j] <= cutoff {
                is_neighbor[i * n + j] = true;
            }
        }
    }
    let weight = |i: usize, j: usize| -> f64 {
        if is_neighbor[i * n + j] || is_neighbor[j * n + i] {
            (-d2[i * n + j] / bandwidth).exp()
        } else {
            0.0
        }
    };
    let degrees: Vec<f64> = (0..n)
        .map(|i| stable_sum((0..n).filter(|&j| j != i).map(|j| weight(i, j))))
        .collect();
    let degree_total = stable_sum(degrees.iter().copied());

    let mut scores = Vec::with_capacity(d);
    for col in &zcols {
        let weighted_mean =
            stable_sum(col.iter().zip(&degrees).map(|(&f, &deg)| deg * f)) / degree_total;
        let centered: Vec<f64> = col.iter().map(|&f| f - weighted_mean).collect();
        let den = stable_sum(centered.iter().zip(&degrees).map(|(&f, &deg)| deg * f * f));
        if den <= EPSILON {
            scores.push(f64::INFINITY);
            continue;
        }
        let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        let num = stable_sum(pairs.map(|(i, j)| {
            let diff = centered[i] - centered[j];
            weight(i, j) * diff * diff
        }));
        scores.push(num / (den + EPSILON));
    }
    Ok(scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::validate_dataset;
    use crate::dataset::RngSeed;
    use rand::Rng;

    #[test]
    fn constant_feature_is_ranked_worst() {
        let rows = vec![
            vec![1.0, 9.0],
            vec![2.0, 9.0],
            vec![3.0, 9.0],
            vec![4.0, 9.0],
        ];
        let ds = validate_dataset(&rows, &[0.0, 0.0, 1.0, 1.0]).unwrap();
        let s = laplacian_scores(&ds, 2, None).unwrap();
        assert!(s[0].is_finite());
        assert!(s[1].is_infinite());
    }

    #[test]
    fn separating_feature_scores_below_noise() {
        let mut rng = RngSeed(11).rng();
        let n = 40;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let blob = if i < n / 2 { -4.0 } else { 4.0 };
                vec![blob + rng.gen_range(-0.5..0.5), rng.gen_range(-4.0..4.0)]
            })
            .collect();
        let labels: Vec<f64> = (0..n).map(|i| if i < n / 2 { 0.0 } else { 1.0 }).collect();
        let ds = validate_dataset(&rows, &labels).unwrap();
        let s = laplacian_scores(&ds, 5, None).unwrap();
        assert!(
            s[0] < s[1],
            "separating feature scored {} vs noise {}",
            s[0],
            s[1]
        );
    }

    #[test]
    fn duplicate_feature_scores_identically() {
        let rows = vec![
            vec![0.3, 0.3, 5.0],
            vec![1.1, 1.1, 2.0],
            vec![2.4, 2.4, 9.0],
            vec![3.0, 3.0, 1.0],
            vec![4.2, 4.2, 7.0],
        ];
        let ds = validate_dataset(&rows, &[0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let s = laplacian_scores(&ds, 2, None).unwrap();
        assert!((s[0] - s[1]).abs() < 1e-9);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let rows = vec![vec![1.0], vec![2.0], vec![3.0]];
        let ds = validate_dataset(&rows, &[0.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            laplacian_scores(&ds, 3, None),
            Err(FirError::InsufficientSamples { .. })
        ));
    }
}
