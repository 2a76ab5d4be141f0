//! Linear support vector machine trained by dual coordinate descent on the
//! L1-hinge loss, plus decision scoring and rank-based AUC.

use crate::error::FirError;
use crate::numeric::{midranks, EPSILON};
use crate::Result;

/// Dense row-major matrix; the minimal container the trainer needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if r == 0 || c == 0 {
            return Err(FirError::EmptyInput("matrix".to_string()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(FirError::ShapeError(format!(
                    "ragged matrix: row of {} in a {}-column matrix",
                    row.len(),
                    c
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            data,
            rows: r,
            cols: c,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// Trained linear model. `weights` and `bias` satisfy
/// `weights = sum_i dual[i] * y_i * x_i` (and likewise the bias against the
/// implicit constant column used during training).
#[derive(Debug, Clone)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub dual: Vec<f64>,
    pub converged: bool,
}

pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 20_000;

/// Trains the L1-hinge dual with the bias handled by augmenting every row
/// with a constant 1. Coordinates sweep in fixed index order, so training
/// is deterministic; termination is max |projected gradient| < tol over a
/// full sweep. Hitting `max_iter` epochs returns the model with
/// `converged = false` instead of failing.
pub fn train(x: &Matrix, labels: &[u8], c: f64, tol: f64, max_iter: usize) -> Result<LinearModel> {
    let n = x.rows();
    let p = x.cols();
    if labels.len() != n {
        return Err(FirError::ShapeError(format!(
            "{} labels for {} rows",
            labels.len(),
            n
        )));
    }
    let pos = labels.iter().filter(|&&l| l == 1).count();
    if pos == 0 || pos == n {
        return Err(FirError::InsufficientClass(
            "training requires both classes".to_string(),
        ));
    }
    let y: Vec<f64> = labels
        .iter()
        .map(|&l| if l == 1 { 1.0 } else { -1.0 })
        .collect();

    // Q_ii for the augmented rows; the +1.0 is the constant bias column.
    let qd: Vec<f64> = (0..n)
        .map(|i| x.row(i).iter().map(|v| v * v).sum::<f64>() + 1.0)
        .collect();

    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; p];
    let mut b = 0.0;
    let mut converged = false;

    for _epoch in 0..max_iter {
        let mut max_violation: f64 = 0.0;
        for i in 0..n {
            let xi = x.row(i);
            let margin: f64 = w.iter().zip(xi).map(|(wj, xj)| wj * xj).sum::<f64>() + b;
            let g = y[i] * margin - 1.0;
            let a = alpha[i];
            let pg = if a <= 0.0 {
                g.min(0.0)
            } else if a >= c {
                g.max(0.0)
            } else {
                g
            };
            max_violation = max_violation.max(pg.abs());
            if pg != 0.0 {
                let a_new = (a - g / qd[i]).clamp(0.0, c);
                let delta = (a_new - a) * y[i];
                if delta != 0.0 {
                    for (wj, xj) in w.iter_mut().zip(xi) {
                        *wj += delta * xj;
                    }
                    b += delta;
                }
                alpha[i] = a_new;
            }
        }
        if max_violation < tol {
            converged = true;
            break;
        }
    }

    Ok(LinearModel {
        weights: w,
        bias: b,
        c,
        dual: alpha,
        converged,
    })
}

/// `w . x + b` for every row.
pub fn decision_values(model: &LinearModel, x: &Matrix) -> Result<Vec<f64>> {
    if x.cols() != model.weights.len() {
        return Err(FirError::ShapeError(format!(
            "{} columns for a model with {} weights",
            x.cols(),
            model.weights.len()
        )));
    }
    Ok((0..x.rows())
        .map(|i| {
            x.row(i)
                .iter()
                .zip(&model.weights)
                .map(|(xj, wj)| xj * wj)
                .sum::<f64>()
                + model.bias
        })
        .collect())
}

/// Mann-Whitney AUC: (concordant pairs + half the ties) / (n_pos * n_neg),
/// computed from midranks.
pub fn auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(FirError::ShapeError(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(FirError::InsufficientClass(
            "AUC requires both classes".to_string(),
        ));
    }
    let ranks = midranks(scores);
    let rank_sum_pos: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l == 1)
        .map(|(&r, _)| r)
        .sum();
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Per-feature z-scoring statistics fitted on training data only.
#[derive(Debug, Clone)]
pub struct Normalizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Normalizer {
    /// Fits means and population standard deviations, flooring each std at
    /// 1e-12 so constant columns map to zero.
    pub fn fit(x: &Matrix) -> Result<Normalizer> {
        if x.rows() < 2 {
            return Err(FirError::InsufficientSamples {
                needed: 2,
                got: x.rows(),
            });
        }
        let n = x.rows() as f64;
        let p = x.cols();
        let mut means = vec![0.0; p];
        for i in 0..x.rows() {
            for (m, v) in means.iter_mut().zip(x.row(i)) {
                *m += v;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut vars = vec![0.0; p];
        for i in 0..x.rows() {
            for ((s, v), m) in vars.iter_mut().zip(x.row(i)).zip(&means) {
                let d = v - m;
                *s += d * d;
            }
        }
        let stds = vars.iter().map(|&s| (s / n).sqrt().max(EPSILON)).collect();
        Ok(Normalizer { means, stds })
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.means.len() {
            return Err(FirError::ShapeError(format!(
                "{} columns for a normalizer fitted on {}",
                x.cols(),
                self.means.len()
            )));
        }
        let rows = (0..x.rows())
            .map(|i| {
                x.row(i)
                    .iter()
                    .zip(self.means.iter().zip(&self.stds))
                    .map(|(v, (m, s))| (v - m) / s)
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows)
    }
}
