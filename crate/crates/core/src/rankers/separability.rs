//! Per-feature class-separability statistics: Welch t, symmetric Gaussian
//! KL divergence, Gaussian Bhattacharyya distance, ROC distance from
//! chance, tie-corrected Mann-Whitney z, Kruskal-Wallis H, Fisher score
//! and Gini impurity reduction.

use crate::error::FirError;
use crate::numeric::{
    mean_and_pop_var, mean_and_sample_var, midranks, stable_sum, tie_group_sizes, EPSILON,
};
use crate::svm;
use crate::Result;

/// Two-sample separability criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    TTest,
    Entropy,
    Bhattacharyya,
    Roc,
    Wilcoxon,
}

/// Scores how well one feature separates the two classes; larger is more
/// separable, identical samples score 0. Each class needs two values.
pub fn separability_score(x0: &[f64], x1: &[f64], criterion: Criterion) -> Result<f64> {
    if x0.len() < 2 || x1.len() < 2 {
        return Err(FirError::InsufficientClass(format!(
            "criterion needs 2 samples per class, got {} and {}",
            x0.len(),
            x1.len()
        )));
    }
    Ok(match criterion {
        Criterion::TTest => welch_t(x0, x1),
        Criterion::Entropy => symmetric_kl(x0, x1),
        Criterion::Bhattacharyya => bhattacharyya(x0, x1),
        Criterion::Roc => roc_distance(x0, x1),
        Criterion::Wilcoxon => wilcoxon_z(x0, x1),
    })
}

fn welch_t(x0: &[f64], x1: &[f64]) -> f64 {
    let (m0, v0) = mean_and_sample_var(x0);
    let (m1, v1) = mean_and_sample_var(x1);
    let se = (v0.max(EPSILON) / x0.len() as f64 + v1.max(EPSILON) / x1.len() as f64).sqrt();
    (m0 - m1).abs() / se
}

/// KL(p||q) + KL(q||p) for the per-class Gaussian fits.
fn symmetric_kl(x0: &[f64], x1: &[f64]) -> f64 {
    let (m0, v0raw) = mean_and_sample_var(x0);
    let (m1, v1raw) = mean_and_sample_var(x1);
    let v0 = v0raw.max(EPSILON);
    let v1 = v1raw.max(EPSILON);
    let kl = |mp: f64, vp: f64, mq: f64, vq: f64| {
        (vq / vp).sqrt().ln() + (vp + (mp - mq) * (mp - mq)) / (2.0 * vq) - 0.5
    };
    kl(m0, v0, m1, v1) + kl(m1, v1, m0, v0)
}

fn bhattacharyya(x0: &[f64], x1: &[f64]) -> f64 {
    let (m0, v0raw) = mean_and_sample_var(x0);
    let (m1, v1raw) = mean_and_sample_var(x1);
    let v0 = v0raw.max(EPSILON);
    let v1 = v1raw.max(EPSILON);
    let dm = m0 - m1;
    0.25 * dm * dm / (v0 + v1) + 0.5 * ((v0 + v1) / (2.0 * v0.sqrt() * v1.sqrt())).ln()
}

/// Area between the empirical ROC curve and the chance diagonal.
fn roc_distance(x0: &[f64], x1: &[f64]) -> f64 {
    let scores: Vec<f64> = x0.iter().chain(x1).copied().collect();
    let labels: Vec<u8> = std::iter::repeat_n(0u8, x0.len())
        .chain(std::iter::repeat_n(1u8, x1.len()))
        .collect();
    // both classes are non-empty by the caller's precondition
    let auc = svm::auc(&scores, &labels).expect("two non-empty classes");
    (auc - 0.5).abs()
}

/// |U - n0 n1 / 2| / sqrt(tie-corrected variance), midrank ties.
fn wilcoxon_z(x0: &[f64], x1: &[f64]) -> f64 {
    let n0 = x0.len() as f64;
    let n1 = x1.len() as f64;
    let n = n0 + n1;
    let combined: Vec<f64> = x0.iter().chain(x1).copied().collect();
    let ranks = midranks(&combined);
    let r1: f64 = stable_sum(ranks[x0.len()..].iter().copied());
    let u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    let tie_term: f64 = tie_group_sizes(&combined)
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let variance = n0 * n1 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        // every observation tied: no separation
        return 0.0;
    }
    (u1 - n0 * n1 / 2.0).abs() / variance.sqrt()
}

/// Kruskal-Wallis H with midrank ties and tie correction. All-tied input
/// scores 0.
pub fn kruskal_wallis_score(values: &[f64], labels: &[u8]) -> Result<f64> {
    if values.len() != labels.len() {
        return Err(FirError::ShapeError(format!(
            "{} values for {} labels",
            values.len(),
            labels.len()
        )));
    }
    let n1 = labels.iter().filter(|&&l| l == 1).count();
    let n0 = labels.len() - n1;
    if n0 == 0 || n1 == 0 {
        return Err(FirError::InsufficientClass(
            "Kruskal-Wallis requires both classes".to_string(),
        ));
    }
    let n = values.len() as f64;
    let ranks = midranks(values);
    let mut rank_sums = [0.0f64; 2];
    {
        let mut terms = [Vec::new(), Vec::new()];
        for (r, &l) in ranks.iter().zip(labels) {
            terms[l as usize].push(*r);
        }
        rank_sums[0] = stable_sum(terms[0].iter().copied());
        rank_sums[1] = stable_sum(terms[1].iter().copied());
    }
    let h = 12.0 / (n * (n + 1.0))
        * (rank_sums[0] * rank_sums[0] / n0 as f64 + rank_sums[1] * rank_sums[1] / n1 as f64)
        - 3.0 * (n + 1.0);
    let tie_term: f64 = tie_group_sizes(values)
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let correction = 1.0 - tie_term / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(0.0);
    }
    Ok(h / correction)
}

/// Classical per-feature Fisher score: between-class scatter over the
/// summed within-class population variances.
pub fn fisher_score(values: &[f64], labels: &[u8]) -> Result<f64> {
    let (c0, c1) = split_by_label(values, labels)?;
    let (m, _) = mean_and_pop_var(values);
    let (m0, v0) = mean_and_pop_var(&c0);
    let (m1, v1) = mean_and_pop_var(&c1);
    let n0 = c0.len() as f64;
    let n1 = c1.len() as f64;
    let between = n0 * (m0 - m) * (m0 - m) + n1 * (m1 - m) * (m1 - m);
    let within = n0 * v0 + n1 * v1;
    Ok(between / (within + EPSILON))
}

/// Gini impurity reduction over an equal-frequency discretization of the
/// feature into `bins` bins; larger is more informative.
pub fn gini_score(values: &[f64], labels: &[u8], bins: usize) -> Result<f64> {
    if bins < 2 {
        return Err(FirError::ShapeError("need at least 2 bins".to_string()));
    }
    if values.len() != labels.len() {
        return Err(FirError::ShapeError(format!(
            "{} values for {} labels",
            values.len(),
            labels.len()
        )));
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // bin edges at the equal-frequency quantile positions; equal values
    // always land in the same bin
    let edges: Vec<f64> = (1..bins).map(|b| sorted[n * b / bins]).collect();
    let bin_of = |v: f64| edges.iter().filter(|&&e| e <= v).count();

    let impurity = |pos: f64, total: f64| {
        if total == 0.0 {
            return 0.0;
        }
        let p1 = pos / total;
        let p0 = 1.0 - p1;
        1.0 - p0 * p0 - p1 * p1
    };
    let total_pos = labels.iter().filter(|&&l| l == 1).count() as f64;
    let parent = impurity(total_pos, n as f64);

    let mut counts = vec![(0.0f64, 0.0f64); bins];
    for (&v, &l) in values.iter().zip(labels) {
        let b = bin_of(v);
        counts[b].1 += 1.0;
        if l == 1 {
            counts[b].0 += 1.0;
        }
    }
    let child: f64 = counts
        .iter()
        .map(|&(pos, tot)| tot / n as f64 * impurity(pos, tot))
        .sum();
    Ok(parent - child)
}

pub(crate) fn split_by_label(values: &[f64], labels: &[u8]) -> Result<(Vec<f64>, Vec<f64>)> {
    if values.len() != labels.len() {
        return Err(FirError::ShapeError(format!(
            "{} values for {} labels",
            values.len(),
            labels.len()
        )));
    }
    let mut c0 = Vec::new();
    let mut c1 = Vec::new();
    for (&v, &l) in values.iter().zip(labels) {
        if l == 0 {
            c0.push(v);
        } else {
            c1.push(v);
        }
    }
    if c0.is_empty() || c1.is_empty() {
        return Err(FirError::InsufficientClass(
            "both classes must be present".to_string(),
        ));
    }
    Ok((c0, c1))
}
