//! Exhaustive subset search over the cross-validated linear SVM.

use std::io::Write;

use rayon::prelude::*;

use super::subsets::{enumerate_subsets, subset_count};
use super::{cv_auc, FoldSplit};
use crate::dataset::Dataset;
use crate::error::FirError;
use crate::Result;

/// Guard against combinatorial blowup.
pub const MAX_SEARCH_FEATURES: usize = 25;

/// One evaluated subset with its cross-validated AUC.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetScore {
    pub subset: Vec<usize>,
    pub mean_auc: f64,
    pub std_auc: f64,
}

/// Full audit of an exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_subset: Vec<usize>,
    pub best_mean_auc: f64,
    pub best_std_auc: f64,
    pub evaluated_count: u64,
    pub skipped_folds: usize,
    pub per_subset: Vec<SubsetScore>,
}

/// Evaluates every subset of size 1..=kmax with [`cv_auc`] on shared
/// folds. Subsets run in parallel; the result is independent of worker
/// count because the winner is chosen by a total order after all scores
/// are collected (mean AUC desc, then size asc, then lexicographic).
pub fn exhaustive_search(
    ds: &Dataset,
    kmax: usize,
    folds: &FoldSplit,
    c: f64,
) -> Result<SearchResult> {
    let d = ds.feature_count();
    if d > MAX_SEARCH_FEATURES {
        return Err(FirError::TooManyFeatures {
            d,
            limit: MAX_SEARCH_FEATURES,
        });
    }
    let subsets: Vec<Vec<usize>> = enumerate_subsets(d, kmax)?.collect();
    let scored: Result<Vec<(SubsetScore, usize)>> = subsets
        .into_par_iter()
        .map(|subset| {
            let cv = cv_auc(ds, &subset, folds, c)?;
            Ok((
                SubsetScore {
                    subset,
                    mean_auc: cv.mean,
                    std_auc: cv.std,
                },
                cv.folds_skipped,
            ))
        })
        .collect();
    let scored = scored?;
    let skipped_folds = scored.iter().map(|(_, s)| s).sum();
    let per_subset: Vec<SubsetScore> = scored.into_iter().map(|(s, _)| s).collect();

    let best = per_subset
        .iter()
        .max_by(|a, b| {
            a.mean_auc
                .total_cmp(&b.mean_auc)
                .then(b.subset.len().cmp(&a.subset.len()))
                .then_with(|| b.subset.cmp(&a.subset))
        })
        .expect("at least one subset");
    Ok(SearchResult {
        best_subset: best.subset.clone(),
        best_mean_auc: best.mean_auc,
        best_std_auc: best.std_auc,
        evaluated_count: subset_count(d, kmax),
        skipped_folds,
        per_subset,
    })
}

/// Configuration echoed into every serialized search result.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub seed: u64,
    pub folds: usize,
    pub c: f64,
    pub kmax: usize,
}

/// Writes the key-value block plus the top-50 subsets by mean AUC.
pub fn write_search_result<W: Write>(
    mut w: W,
    result: &SearchResult,
    config: &SearchConfig,
) -> Result<()> {
    writeln!(w, "# exhaustive subset search result")?;
    writeln!(w, "seed = {}", config.seed)?;
    writeln!(w, "folds = {}", config.folds)?;
    writeln!(w, "c = {}", config.c)?;
    writeln!(w, "kmax = {}", config.kmax)?;
    writeln!(w, "evaluated_count = {}", result.evaluated_count)?;
    writeln!(w, "skipped_folds = {}", result.skipped_folds)?;
    writeln!(w, "best_subset = {}", join_subset(&result.best_subset))?;
    writeln!(w, "best_mean_auc = {}", result.best_mean_auc)?;
    writeln!(w, "best_std_auc = {}", result.best_std_auc)?;
    writeln!(w)?;
    writeln!(w, "rank\tsubset\tmean_auc\tstd_auc")?;
    let mut top: Vec<&SubsetScore> = result.per_subset.iter().collect();
    top.sort_by(|a, b| {
        a.mean_auc
            .total_cmp(&b.mean_auc)
            .reverse()
            .then(a.subset.len().cmp(&b.subset.len()))
            .then_with(|| a.subset.cmp(&b.subset))
    });
    for (i, s) in top.iter().take(50).enumerate() {
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            i + 1,
            join_subset(&s.subset),
            s.mean_auc,
            s.std_auc
        )?;
    }
    Ok(())
}

fn join_subset(subset: &[usize]) -> String {
    subset
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{validate_dataset, RngSeed};
    use crate::eval::stratified_folds;
    use rand::Rng;

    fn small_dataset(seed: u64) -> Dataset {
        let mut rng = RngSeed(seed).rng();
        let n = 40;
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n {
            let label = if rng.gen_bool(0.5) { 1.0 } else { 0.0 };
            rows.push(vec![
                label + rng.gen_range(-0.6..0.6),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]);
            labels.push(label);
        }
        validate_dataset(&rows, &labels).unwrap()
    }

    #[test]
    fn d3_search_matches_brute_force_recomputation() {
        let ds = small_dataset(2);
        let folds = stratified_folds(ds.labels(), 4, RngSeed(11)).unwrap();
        let result = exhaustive_search(&ds, 3, &folds, 1.0).unwrap();
        assert_eq!(result.per_subset.len(), 7);
        assert_eq!(result.evaluated_count, 7);

        // independent recomputation straight off cv_auc
        let mut best: Option<(f64, Vec<usize>)> = None;
        for subset in [
            vec![1],
            vec![2],
            vec![3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
            vec![1, 2, 3],
        ] {
            let cv = cv_auc(&ds, &subset, &folds, 1.0).unwrap();
            let better = match &best {
                None => true,
                Some((m, s)) => {
                    cv.mean > *m
                        || (cv.mean == *m
                            && (subset.len() < s.len() || (subset.len() == s.len() && subset < *s)))
                }
            };
            if better {
                best = Some((cv.mean, subset));
            }
        }
        let (best_mean, best_subset) = best.unwrap();
        assert_eq!(result.best_subset, best_subset);
        assert_eq!(result.best_mean_auc, best_mean);
    }

    #[test]
    fn search_is_deterministic_across_pool_sizes() {
        let ds = small_dataset(5);
        let folds = stratified_folds(ds.labels(), 4, RngSeed(3)).unwrap();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| exhaustive_search(&ds, 2, &folds, 1.0))
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| exhaustive_search(&ds, 2, &folds, 1.0))
            .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn best_auc_is_monotone_in_kmax() {
        let ds = small_dataset(8);
        let folds = stratified_folds(ds.labels(), 4, RngSeed(4)).unwrap();
        let mut previous = 0.0f64;
        for kmax in 1..=3 {
            let result = exhaustive_search(&ds, kmax, &folds, 1.0).unwrap();
            assert!(result.best_mean_auc >= previous);
            previous = result.best_mean_auc;
        }
    }

    #[test]
    fn too_many_features_is_guarded() {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64; 26]).collect();
        let labels: Vec<f64> = (0..6).map(|i| (i % 2) as f64).collect();
        let ds = validate_dataset(&rows, &labels).unwrap();
        let folds = stratified_folds(ds.labels(), 3, RngSeed(0)).unwrap();
        assert!(matches!(
            exhaustive_search(&ds, 2, &folds, 1.0),
            Err(FirError::TooManyFeatures { d: 26, .. })
        ));
    }

    #[test]
    fn serialization_includes_config_echo() {
        let ds = small_dataset(6);
        let folds = stratified_folds(ds.labels(), 4, RngSeed(21)).unwrap();
        let result = exhaustive_search(&ds, 2, &folds, 1.0).unwrap();
        let mut buf = Vec::new();
        write_search_result(
            &mut buf,
            &result,
            &SearchConfig {
                seed: 21,
                folds: 4,
                c: 1.0,
                kmax: 2,
            },
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("seed = 21"));
        assert!(text.contains("evaluated_count = 6"));
        assert!(text.contains("best_subset ="));
    }
}
