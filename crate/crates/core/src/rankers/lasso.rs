//! Lasso regularization path on standardized features, ranked by the
//! order in which coefficients first activate along a decreasing penalty
//! grid.

use crate::dataset::{Dataset, Ranking};
use crate::error::FirError;
use crate::numeric::{mean_and_pop_var, stable_sum, EPSILON};
use crate::Result;

const SWEEP_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 10_000;

/// Default grid: `count` values log-spaced from lambda_max down to
/// lambda_max * min_ratio.
pub fn default_grid(lambda_max: f64, count: usize, min_ratio: f64) -> Vec<f64> {
    if count == 1 {
        return vec![lambda_max];
    }
    let log_span = min_ratio.ln();
    (0..count)
        .map(|g| lambda_max * (log_span * g as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Ranks features by first activation along the lasso path; grid-point
/// ties and never-active features fall back to |coefficient| at the final
/// penalty, then index. Scores report the activation penalty (0 for
/// features that never enter).
///
/// The solver is coordinate descent in covariance form on z-scored
/// features against the centered 0/1 labels, minimizing
/// (1/2n) ||y - Xw||^2 + lambda ||w||_1. With that scaling the smallest
/// all-zero penalty is lambda_max = max_j |<x_j, y>| / n.
pub fn lasso_ranking(ds: &Dataset, grid: Option<&[f64]>) -> Result<Ranking> {
    lasso_ranking_with(ds, grid, 100, 1e-4)
}

pub fn lasso_ranking_with(
    ds: &Dataset,
    grid: Option<&[f64]>,
    default_count: usize,
    default_min_ratio: f64,
) -> Result<Ranking> {
    let d = ds.feature_count();
    let n = ds.sample_count() as f64;

    // z-score columns; constant columns become zero and can never activate
    let cols: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let col = ds.column(j);
            let (m, v) = mean_and_pop_var(&col);
            let s = v.sqrt().max(EPSILON);
            col.iter().map(|&x| (x - m) / s).collect()
        })
        .collect();
    let ybar = ds.labels().iter().map(|&l| l as f64).sum::<f64>() / n;
    let yc: Vec<f64> = ds.labels().iter().map(|&l| l as f64 - ybar).collect();

    // covariance form: the sweeps only touch these d x d quantities
    let corr: Vec<f64> = cols
        .iter()
        .map(|col| stable_sum(col.iter().zip(&yc).map(|(&x, &y)| x * y)) / n)
        .collect();
    let mut gram = vec![0.0; d * d];
    for a in 0..d {
        for b in a..d {
            let g = stable_sum(cols[a].iter().zip(&cols[b]).map(|(&x, &y)| x * y)) / n;
            gram[a * d + b] = g;
            gram[b * d + a] = g;
        }
    }

    let lambda_max = corr.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let owned_grid;
    let grid: &[f64] = match grid {
        Some(g) => {
            if g.is_empty() || g.windows(2).any(|w| w[1] >= w[0]) || g.iter().any(|&v| v <= 0.0) {
                return Err(FirError::InvalidGrid);
            }
            g
        }
        None => {
            if lambda_max <= 0.0 {
                // labels uncorrelated with every standardized feature:
                // nothing activates
                return Ranking::from_order("lasso", (1..=d).collect(), vec![0.0; d]);
            }
            owned_grid = default_grid(lambda_max, default_count, default_min_ratio);
            &owned_grid
        }
    };

    let mut w = vec![0.0; d];
    let mut first_active: Vec<Option<usize>> = vec![None; d];
    for (g, &lambda) in grid.iter().enumerate() {
        for _sweep in 0..MAX_SWEEPS {
            let mut max_delta = 0.0f64;
            for j in 0..d {
                let qjj = gram[j * d + j];
                if qjj <= EPSILON {
                    continue;
                }
                let mut rho = corr[j];
                for b in 0..d {
                    if b != j {
                        rho -= gram[j * d + b] * w[b];
                    }
                }
                let new = soft_threshold(rho, lambda) / qjj;
                max_delta = max_delta.max((new - w[j]).abs());
                w[j] = new;
            }
            if max_delta < SWEEP_TOL {
                break;
            }
        }
        for j in 0..d {
            if w[j] != 0.0 && first_active[j].is_none() {
                first_active[j] = Some(g);
            }
        }
    }

    let mut order: Vec<usize> = (1..=d).collect();
    order.sort_by(|&a, &b| {
        let (ia, ib) = (a - 1, b - 1);
        let act_a = first_active[ia].unwrap_or(usize::MAX);
        let act_b = first_active[ib].unwrap_or(usize::MAX);
        act_a
            .cmp(&act_b)
            .then(w[ib].abs().total_cmp(&w[ia].abs()))
            .then(a.cmp(&b))
    });
    let scores: Vec<f64> = (0..d)
        .map(|j| first_active[j].map(|g| grid[g]).unwrap_or(0.0))
        .collect();
    Ranking::from_order("lasso", order, scores)
}

fn soft_threshold(z: f64, lambda: f64) -> f64 {
    if z > lambda {
        z - lambda
    } else if z < -lambda {
        z + lambda
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::validate_dataset;

    #[test]
    fn label_column_activates_first() {
        let rows = vec![
            vec![0.0, 0.3, 0.8],
            vec![0.0, 0.9, 0.1],
            vec![1.0, 0.2, 0.7],
            vec![1.0, 0.8, 0.2],
            vec![0.0, 0.5, 0.9],
            vec![1.0, 0.1, 0.4],
        ];
        let ds = validate_dataset(&rows, &[0.0, 0.0, 1.0, 1.0, 0.0, 1.0]).unwrap();
        let r = lasso_ranking(&ds, None).unwrap();
        assert_eq!(r.order[0], 1, "order {:?}", r.order);
        assert!(r.scores[0] > r.scores[1] && r.scores[0] > r.scores[2]);
    }

    #[test]
    fn nothing_activates_at_lambda_max() {
        let rows = vec![
            vec![0.1, 0.5],
            vec![0.4, 0.2],
            vec![0.8, 0.9],
            vec![0.9, 0.1],
        ];
        let ds = validate_dataset(&rows, &[0.0, 0.0, 1.0, 1.0]).unwrap();
        // single-point grid at lambda_max: every coefficient must stay 0,
        // which from_order verifies via the all-zero activation scores
        let labels: Vec<f64> = ds.labels().iter().map(|&l| l as f64).collect();
        let ybar = labels.iter().sum::<f64>() / labels.len() as f64;
        let mut lmax = 0.0f64;
        for j in 0..2 {
            let col = ds.column(j);
            let (m, v) = mean_and_pop_var(&col);
            let s = v.sqrt().max(EPSILON);
            let c: f64 = col
                .iter()
                .zip(&labels)
                .map(|(&x, &y)| (x - m) / s * (y - ybar))
                .sum::<f64>()
                / labels.len() as f64;
            lmax = lmax.max(c.abs());
        }
        let r = lasso_ranking(&ds, Some(&[lmax])).unwrap();
        assert_eq!(
            r.scores,
            vec![0.0, 0.0],
            "no feature may activate at lambda_max"
        );
        assert_eq!(r.order, vec![1, 2]);
    }

    #[test]
    fn non_decreasing_grid_is_rejected() {
        let rows = vec![vec![0.0], vec![1.0], vec![0.5], vec![0.9]];
        let ds = validate_dataset(&rows, &[0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            lasso_ranking(&ds, Some(&[0.1, 0.1])),
            Err(FirError::InvalidGrid)
        ));
        assert!(matches!(
            lasso_ranking(&ds, Some(&[0.1, 0.5])),
            Err(FirError::InvalidGrid)
        ));
    }

    #[test]
    fn orthogonal_design_activates_by_descending_correlation() {
        // orthogonalize three seeded columns, then the closed-form path
        // under an orthogonal design activates by descending |corr|
        let raw: Vec<Vec<f64>> = vec![
            vec![0.9, -1.2, 0.4],
            vec![-0.3, 0.8, 1.1],
            vec![1.7, 0.1, -0.6],
            vec![-1.1, -0.5, 0.9],
            vec![0.2, 1.4, -1.3],
            vec![-0.8, 0.6, 0.2],
            vec![1.3, -0.9, -0.8],
            vec![-1.9, -0.3, 0.1],
        ];
        let labels = [0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0];
        let n = raw.len();
        let d = 3;
        // center, then modified Gram-Schmidt
        let mut cols: Vec<Vec<f64>> = (0..d)
            .map(|j| {
                let col: Vec<f64> = raw.iter().map(|r| r[j]).collect();
                let m = col.iter().sum::<f64>() / n as f64;
                col.iter().map(|&x| x - m).collect()
            })
            .collect();
        for j in 0..d {
            for prev in 0..j {
                let dot: f64 = cols[j].iter().zip(&cols[prev]).map(|(a, b)| a * b).sum();
                let nrm: f64 = cols[prev].iter().map(|v| v * v).sum();
                let coef = dot / nrm;
                for i in 0..n {
                    cols[j][i] -= coef * cols[prev][i];
                }
            }
        }
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..d).map(|j| cols[j][i]).collect())
            .collect();
        let ds = validate_dataset(&rows, &labels).unwrap();

        // oracle: |<x_hat_j, yc>| / n with the same standardization
        let ybar = labels.iter().sum::<f64>() / n as f64;
        let mut corr: Vec<f64> = (0..d)
            .map(|j| {
                let col = ds.column(j);
                let (m, v) = mean_and_pop_var(&col);
                let s = v.sqrt().max(EPSILON);
                col.iter()
                    .zip(&labels)
                    .map(|(&x, &y)| (x - m) / s * (y - ybar))
                    .sum::<f64>()
                    / n as f64
            })
            .collect();
        let mut expected: Vec<usize> = (1..=d).collect();
        expected.sort_by(|&a, &b| corr[b - 1].abs().total_cmp(&corr[a - 1].abs()));
        corr.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        assert!(
            corr[0].abs() > 1.3 * corr[1].abs() && corr[1].abs() > 1.3 * corr[2].abs(),
            "test data must separate the correlations: {corr:?}"
        );

        let r = lasso_ranking(&ds, None).unwrap();
        assert_eq!(r.order, expected);
    }
}
