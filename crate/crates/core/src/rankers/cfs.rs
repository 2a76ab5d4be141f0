//! Correlation-based feature selection turned into a ranking: forward
//! selection on the CFS merit, stalled tail appended by individual
//! label correlation.

use crate::dataset::{Dataset, Ranking};
use crate::numeric::pearson;

/// CFS merit of a candidate set: k r_cf / sqrt(k + k (k-1) r_ff), with
/// mean absolute feature-label and feature-feature Pearson correlations.
pub(crate) fn merit(subset: &[usize], r_cf: &[f64], r_ff: &[Vec<f64>]) -> f64 {
    let k = subset.len() as f64;
    let mean_cf: f64 = subset.iter().map(|&j| r_cf[j]).sum::<f64>() / k;
    let mean_ff = if subset.len() < 2 {
        0.0
    } else {
        let mut total = 0.0;
        let mut pairs = 0.0;
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                total += r_ff[i][j];
                pairs += 1.0;
            }
        }
        total / pairs
    };
    k * mean_cf / (k + k * (k - 1.0) * mean_ff).sqrt()
}

/// Forward-selection CFS ranking. Features enter in the order greedy merit
/// maximization includes them; once no candidate strictly improves the
/// merit, the remaining features are appended by descending individual
/// label correlation. Reported scores are the per-feature |r_cf|.
pub fn cfs_ranking(ds: &Dataset) -> Ranking {
    let d = ds.feature_count();
    let labels: Vec<f64> = ds.labels().iter().map(|&l| l as f64).collect();
    let r_cf: Vec<f64> = (0..d)
        .map(|j| pearson(&ds.column(j), &labels).abs())
        .collect();
    let mut r_ff = vec![vec![0.0; d]; d];
    for i in 0..d {
        let ci = ds.column(i);
        for j in (i + 1)..d {
            let r = pearson(&ci, &ds.column(j)).abs();
            r_ff[i][j] = r;
            r_ff[j][i] = r;
        }
    }

    let first = (0..d)
        .max_by(|&a, &b| r_cf[a].total_cmp(&r_cf[b]).then(b.cmp(&a)))
        .unwrap();
    let mut selected = vec![first];
    let mut remaining: Vec<usize> = (0..d).filter(|&j| j != first).collect();
    let mut current_merit = merit(&selected, &r_cf, &r_ff);

    while !remaining.is_empty() {
        let mut best: Option<(f64, usize)> = None;
        for &cand in &remaining {
            let mut trial = selected.clone();
            trial.push(cand);
            let m = merit(&trial, &r_cf, &r_ff);
            let better = match best {
                None => true,
                Some((bm, bc)) => m > bm || (m == bm && cand < bc),
            };
            if better {
                best = Some((m, cand));
            }
        }
        let (best_merit, best_cand) = best.unwrap();
        if best_merit <= current_merit {
            break; // merit stalled
        }
        selected.push(best_cand);
        remaining.retain(|&j| j != best_cand);
        current_merit = best_merit;
    }
    // stalled tail: descending individual correlation, then index
    remaining.sort_by(|&a, &b| r_cf[b].total_cmp(&r_cf[a]).then(a.cmp(&b)));
    selected.extend(remaining);

    let order: Vec<usize> = selected.iter().map(|&j| j + 1).collect();
    Ranking::from_order("cfs", order, r_cf).expect("forward selection emits a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::validate_dataset;

    #[test]
    fn single_feature_ranks_trivially() {
        let rows = vec![vec![0.0], vec![0.2], vec![0.9], vec![1.0]];
        let ds = validate_dataset(&rows, &[0.0, 0.0, 1.0, 1.0]).unwrap();
        let r = cfs_ranking(&ds);
        assert_eq!(r.order, vec![1]);
        assert!((r.scores[0] - pearson(&ds.column(0), &[0.0, 0.0, 1.0, 1.0]).abs()).abs() < 1e-12);
    }

    #[test]
    fn redundant_duplicate_loses_to_complement() {
        // A: r_cf = 0.5; B: exact duplicate of A; C: r_cf = 0.5 but
        // uncorrelated with A. The merit penalty on r_ff(A,B) = 1 pushes
        // C ahead of B at step 2: merit{A,C} = 1/sqrt(2) > merit{A,B} = 0.5.
        let a = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0];
        let c = [0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0];
        let labels = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        let rows: Vec<Vec<f64>> = (0..8).map(|i| vec![a[i], a[i], c[i]]).collect();
        let ds = validate_dataset(&rows, &labels).unwrap();

        let r = cfs_ranking(&ds);
        assert_eq!(r.order[0], 1, "index tie-break must pick feature 1 first");
        let pos_b = r.position_of(2).unwrap();
        let pos_c = r.position_of(3).unwrap();
        assert!(
            pos_c < pos_b,
            "expected C before redundant B, got {:?}",
            r.order
        );

        // exhaustive merit check over all pairs containing the first pick
        let labels_f: Vec<f64> = labels.to_vec();
        let r_cf: Vec<f64> = (0..3)
            .map(|j| pearson(&ds.column(j), &labels_f).abs())
            .collect();
        let mut r_ff = vec![vec![0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    r_ff[i][j] = pearson(&ds.column(i), &ds.column(j)).abs();
                }
            }
        }
        let merit_ab = merit(&[0, 1], &r_cf, &r_ff);
        let merit_ac = merit(&[0, 2], &r_cf, &r_ff);
        assert!(merit_ac > merit_ab, "oracle: {merit_ac} <= {merit_ab}");
    }

    #[test]
    fn identical_features_fall_back_to_index_order() {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64; 3]).collect();
        let ds = validate_dataset(&rows, &[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let r = cfs_ranking(&ds);
        assert_eq!(r.order, vec![1, 2, 3]);
    }

    #[test]
    fn zero_variance_feature_scores_zero_correlation() {
        let rows = vec![
            vec![5.0, 0.1],
            vec![5.0, 0.7],
            vec![5.0, 0.2],
            vec![5.0, 0.9],
        ];
        let ds = validate_dataset(&rows, &[0.0, 1.0, 0.0, 1.0]).unwrap();
        let r = cfs_ranking(&ds);
        assert_eq!(r.scores[0], 0.0);
        assert_eq!(r.order[0], 2);
    }
}
