//! Cross-validated exhaustive subset search, the effectiveness metric and
//! table-style reporting.

pub mod report;
pub mod search;
pub mod subsets;

pub use report::{build_report, effectiveness, ReportRow, ReportTable};
pub use search::{exhaustive_search, write_search_result, SearchConfig, SearchResult, SubsetScore};
pub use subsets::{enumerate_subsets, subset_count};

use rand::seq::SliceRandom;

use crate::dataset::{Dataset, RngSeed};
use crate::error::FirError;
use crate::svm::{self, Matrix, Normalizer};
use crate::Result;

/// Stratified partition of the sample indices into k folds.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldSplit {
    folds: Vec<Vec<usize>>,
    seed: RngSeed,
}

impl FoldSplit {
    pub fn fold_count(&self) -> usize {
        self.folds.len()
    }

    pub fn seed(&self) -> RngSeed {
        self.seed
    }

    /// Test-fold index lists (0-based sample indices).
    pub fn folds(&self) -> &[Vec<usize>] {
        &self.folds
    }

    /// (train, test) index pairs, one per fold.
    pub fn splits(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n: usize = self.folds.iter().map(|f| f.len()).sum();
        self.folds
            .iter()
            .map(|test| {
                let mut in_test = vec![false; n];
                for &i in test {
                    in_test[i] = true;
                }
                let train = (0..n).filter(|&i| !in_test[i]).collect();
                (train, test.clone())
            })
            .collect()
    }
}

/// Splits samples into k folds, stratified so each fold's class counts
/// stay within one sample of the global ratio. Per-class index lists are
/// shuffled with the seeded generator, then dealt round-robin with a fold
/// pointer that persists across classes to balance fold sizes.
pub fn stratified_folds(labels: &[u8], k: usize, seed: RngSeed) -> Result<FoldSplit> {
    if k < 2 {
        return Err(FirError::ShapeError("need at least 2 folds".to_string()));
    }
    let mut class0: Vec<usize> = Vec::new();
    let mut class1: Vec<usize> = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        if l == 0 {
            class0.push(i);
        } else {
            class1.push(i);
        }
    }
    if class0.len() < k || class1.len() < k {
        return Err(FirError::InsufficientClass(format!(
            "stratified {k}-fold needs {k} samples per class, got {} and {}",
            class0.len(),
            class1.len()
        )));
    }
    let mut rng = seed.rng();
    let mut folds = vec![Vec::new(); k];
    let mut pointer = 0usize;
    for class in [&mut class0, &mut class1] {
        class.shuffle(&mut rng);
        for &idx in class.iter() {
            folds[pointer].push(idx);
            pointer = (pointer + 1) % k;
        }
    }
    Ok(FoldSplit { folds, seed })
}

/// Cross-validated AUC for one feature subset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvAuc {
    pub mean: f64,
    pub std: f64,
    pub folds_used: usize,
    pub folds_skipped: usize,
}

/// Per fold: z-score the subset's columns on the training rows only,
/// train the linear SVM, score the held-out rows and take the AUC. Folds
/// whose test split is single-class are skipped and counted; mean and
/// sample standard deviation run over the remaining folds.
pub fn cv_auc(ds: &Dataset, subset: &[usize], folds: &FoldSplit, c: f64) -> Result<CvAuc> {
    validate_subset(ds, subset)?;
    let cols: Vec<usize> = subset.iter().map(|&j| j - 1).collect();
    let labels = ds.labels();
    let mut aucs = Vec::with_capacity(folds.fold_count());
    let mut skipped = 0usize;
    for (train, test) in folds.splits() {
        let test_pos = test.iter().filter(|&&i| labels[i] == 1).count();
        if test_pos == 0 || test_pos == test.len() {
            skipped += 1;
            continue;
        }
        let gather = |idx: &[usize]| -> Result<Matrix> {
            Matrix::from_rows(
                idx.iter()
                    .map(|&i| cols.iter().map(|&j| ds.value(i, j)).collect())
                    .collect(),
            )
        };
        let x_train = gather(&train)?;
        let x_test = gather(&test)?;
        let y_train: Vec<u8> = train.iter().map(|&i| labels[i]).collect();
        let y_test: Vec<u8> = test.iter().map(|&i| labels[i]).collect();

        let norm = Normalizer::fit(&x_train)?;
        let model = svm::train(
            &norm.apply(&x_train)?,
            &y_train,
            c,
            svm::DEFAULT_TOL,
            svm::DEFAULT_MAX_ITER,
        )?;
        let scores = svm::decision_values(&model, &norm.apply(&x_test)?)?;
        aucs.push(svm::auc(&scores, &y_test)?);
    }
    if aucs.is_empty() {
        return Err(FirError::EvaluationFailure(
            "every fold had a single-class test split".to_string(),
        ));
    }
    let used = aucs.len();
    let mean = aucs.iter().sum::<f64>() / used as f64;
    let std = if used > 1 {
        (aucs.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / (used - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(CvAuc {
        mean,
        std,
        folds_used: used,
        folds_skipped: skipped,
    })
}

pub(crate) fn validate_subset(ds: &Dataset, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(FirError::EmptyInput("feature subset".to_string()));
    }
    for &j in subset {
        if j == 0 || j > ds.feature_count() {
            return Err(FirError::InvalidIndex {
                index: j,
                d: ds.feature_count(),
            });
        }
    }
    Ok(())
}
