//! Feature-affinity graph and the two rankers built on it: eigenvector
//! centrality and summed infinite-path energies.

use crate::dataset::{Dataset, Ranking};
use crate::error::FirError;
use crate::numeric::spearman;
use crate::rankers::separability::fisher_score;
use crate::Result;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 10_000;

/// Symmetric non-negative feature-feature affinity with zero diagonal:
/// A_ij = alpha * max(s_i, s_j) + (1 - alpha) * (1 - |rho_ij|), where s is
/// the min-max-normalized Fisher score and rho the Spearman correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureAffinity {
    matrix: Vec<f64>,
    d: usize,
}

impl FeatureAffinity {
    /// Wraps an explicit affinity matrix; symmetry within 1e-12,
    /// non-negativity and a zero diagonal are enforced.
    pub fn from_matrix(matrix: Vec<f64>, d: usize) -> Result<FeatureAffinity> {
        if matrix.len() != d * d {
            return Err(FirError::ShapeError(format!(
                "{} entries for a {d}x{d} affinity",
                matrix.len()
            )));
        }
        for i in 0..d {
            if matrix[i * d + i] != 0.0 {
                return Err(FirError::ShapeError(
                    "affinity diagonal must be zero".to_string(),
                ));
            }
            for j in 0..d {
                let v = matrix[i * d + j];
                if v.is_nan() || v < 0.0 {
                    return Err(FirError::InvalidValue { row: i, col: j });
                }
                if (v - matrix[j * d + i]).abs() > 1e-12 {
                    return Err(FirError::ShapeError(
                        "affinity must be symmetric".to_string(),
                    ));
                }
            }
        }
        Ok(FeatureAffinity { matrix, d })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.d + j]
    }

    fn max_entry(&self) -> f64 {
        self.matrix.iter().fold(0.0f64, |m, &v| m.max(v))
    }
}

/// Builds the affinity from relevancy (Fisher scores) and redundancy
/// (rank correlation), mixed by `alpha`.
pub fn feature_affinity(ds: &Dataset, alpha: f64) -> Result<FeatureAffinity> {
    let d = ds.feature_count();
    if d < 2 {
        return Err(FirError::ShapeError(
            "affinity needs at least 2 features".to_string(),
        ));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(FirError::ShapeError(format!(
            "mixing weight {alpha} outside [0, 1]"
        )));
    }
    let fisher: Vec<f64> = (0..d)
        .map(|j| fisher_score(&ds.column(j), ds.labels()))
        .collect::<Result<_>>()?;
    let lo = fisher.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let hi = fisher.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let norm: Vec<f64> = fisher
        .iter()
        .map(|&v| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
        .collect();

    let cols: Vec<Vec<f64>> = (0..d).map(|j| ds.column(j)).collect();
    let mut matrix = vec![0.0; d * d];
    for i in 0..d {
        for j in (i + 1)..d {
            let rho = spearman(&cols[i], &cols[j]).abs();
            let a = alpha * norm[i].max(norm[j]) + (1.0 - alpha) * (1.0 - rho);
            matrix[i * d + j] = a;
            matrix[j * d + i] = a;
        }
    }
    FeatureAffinity::from_matrix(matrix, d)
}

/// Dominant-eigenvector (Perron) scores of the affinity by power
/// iteration, unit 1-norm. A small diagonal shift keeps the iteration
/// convergent on bipartite-like graphs without moving the eigenvector.
pub fn eigenvector_centrality(aff: &FeatureAffinity) -> Result<Vec<f64>> {
    let d = aff.dim();
    let shift = 0.1 * aff.max_entry();
    if shift == 0.0 {
        // empty graph: every feature equally central
        return Ok(vec![1.0 / d as f64; d]);
    }
    let mut v = vec![1.0 / d as f64; d];
    for _ in 0..POWER_MAX_ITER {
        let mut next: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|j| aff.at(i, j) * v[j]).sum::<f64>() + shift * v[i])
            .collect();
        let norm: f64 = next.iter().sum(); // entries stay non-negative
        if norm <= 0.0 {
            return Err(FirError::ConvergenceFailure(
                "power iteration collapsed to zero".to_string(),
            ));
        }
        for x in &mut next {
            *x /= norm;
        }
        let change: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = next;
        if change < POWER_TOL {
            return Ok(v);
        }
    }
    Err(FirError::ConvergenceFailure(format!(
        "power iteration did not settle in {POWER_MAX_ITER} iterations"
    )))
}

/// Ranks by eigenvector centrality of the feature affinity.
pub fn ecfs_ranking(ds: &Dataset, alpha: f64) -> Result<Ranking> {
    let aff = feature_affinity(ds, alpha)?;
    let scores = eigenvector_centrality(&aff)?;
    Ok(Ranking::from_scores("ecfs", scores, false))
}

/// The path-energy decomposition used by the infinite-path ranker:
/// S = (I - rA)^{-1} - I with r = 0.9 / spectral_radius(A).
#[derive(Debug, Clone)]
pub struct PathEnergies {
    /// d x d row-major S.
    pub s_matrix: Vec<f64>,
    pub r: f64,
    pub d: usize,
}

/// Spectral radius of the symmetric non-negative affinity via shifted
/// power iteration (Rayleigh quotient).
pub fn spectral_radius(aff: &FeatureAffinity) -> Result<f64> {
    let d = aff.dim();
    let shift = 0.1 * aff.max_entry();
    if shift == 0.0 {
        return Ok(0.0);
    }
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    let mut rayleigh = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let next: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|j| aff.at(i, j) * v[j]).sum::<f64>() + shift * v[i])
            .collect();
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 0.0 {
            return Err(FirError::ConvergenceFailure(
                "spectral radius estimate collapsed".to_string(),
            ));
        }
        let next: Vec<f64> = next.iter().map(|x| x / norm).collect();
        let new_rayleigh: f64 = (0..d)
            .map(|i| {
                let av: f64 = (0..d).map(|j| aff.at(i, j) * next[j]).sum::<f64>();
                next[i] * av
            })
            .sum();
        let done = (new_rayleigh - rayleigh).abs() < POWER_TOL * (1.0 + new_rayleigh.abs());
        rayleigh = new_rayleigh;
        v = next;
        if done {
            return Ok(rayleigh);
        }
    }
    Err(FirError::ConvergenceFailure(
        "spectral radius estimate did not settle".to_string(),
    ))
}

/// Computes S = (I - rA)^{-1} - I by Gaussian elimination; (I - rA) is
/// positive definite because r keeps every eigenvalue of rA below 0.9.
pub fn path_energies(aff: &FeatureAffinity) -> Result<PathEnergies> {
    let d = aff.dim();
    let rho = spectral_radius(aff)?;
    if rho <= f64::MIN_POSITIVE {
        // empty graph: no paths at all
        return Ok(PathEnergies {
            s_matrix: vec![0.0; d * d],
            r: 0.0,
            d,
        });
    }
    let r = 0.9 / rho;
    // m = I - rA
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            m[i * d + j] = if i == j { 1.0 } else { -r * aff.at(i, j) };
        }
    }
    let inv = invert(&mut m, d)?;
    let mut s = inv;
    for i in 0..d {
        s[i * d + i] -= 1.0;
    }
    Ok(PathEnergies { s_matrix: s, r, d })
}

/// Gaussian elimination with partial pivoting.
fn invert(m: &mut [f64], d: usize) -> Result<Vec<f64>> {
    let mut inv = vec![0.0; d * d];
    for i in 0..d {
        inv[i * d + i] = 1.0;
    }
    for col in 0..d {
        let pivot_row = (col..d)
            .max_by(|&a, &b| m[a * d + col].abs().total_cmp(&m[b * d + col].abs()))
            .unwrap();
        if m[pivot_row * d + col].abs() < 1e-300 {
            return Err(FirError::ConvergenceFailure(
                "singular path matrix".to_string(),
            ));
        }
        if pivot_row != col {
            for j in 0..d {
                m.swap(col * d + j, pivot_row * d + j);
                inv.swap(col * d + j, pivot_row * d + j);
            }
        }
        let pivot = m[col * d + col];
        for j in 0..d {
            m[col * d + j] /= pivot;
            inv[col * d + j] /= pivot;
        }
        for row in 0..d {
            if row == col {
                continue;
            }
            let factor = m[row * d + col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..d {
                m[row * d + j] -= factor * m[col * d + j];
                inv[row * d + j] -= factor * inv[col * d + j];
            }
        }
    }
    Ok(inv)
}

/// Per-feature energies: row sums of the resolvent (I - rA)^{-1}, i.e.
/// 1 + the row sums of S. The identity term is a constant shift shared by
/// every feature, so the ranking matches the raw path sums.
pub fn inffs_scores(aff: &FeatureAffinity) -> Result<Vec<f64>> {
    let pe = path_energies(aff)?;
    Ok((0..pe.d)
        .map(|i| 1.0 + pe.s_matrix[i * pe.d..(i + 1) * pe.d].iter().sum::<f64>())
        .collect())
}

/// Ranks by descending infinite-path energy.
pub fn inffs_ranking(ds: &Dataset, alpha: f64) -> Result<Ranking> {
    let aff = feature_affinity(ds, alpha)?;
    let scores = inffs_scores(&aff)?;
    Ok(Ranking::from_scores("inffs", scores, false))
}
