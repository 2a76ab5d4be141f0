//! Fourteen feature-importance-ranking methods behind one dispatch
//! surface. Every method consumes a validated [`Dataset`] and produces a
//! [`Ranking`]; ties always break by ascending feature index.

pub mod cfs;
pub mod graph;
pub mod laplacian;
pub mod lasso;
pub mod relieff;
pub mod separability;

pub use cfs::cfs_ranking;
pub use graph::{
    ecfs_ranking, eigenvector_centrality, feature_affinity, inffs_ranking, inffs_scores,
    path_energies, spectral_radius, FeatureAffinity, PathEnergies,
};
pub use laplacian::laplacian_scores;
pub use lasso::{default_grid, lasso_ranking, lasso_ranking_with};
pub use relieff::relieff_weights;
pub use separability::{
    fisher_score, gini_score, kruskal_wallis_score, separability_score, Criterion,
};

use std::io::{BufRead, BufReader, Write};

use crate::dataset::{Dataset, Ranking};
use crate::error::FirError;
use crate::Result;

/// The supported ranking methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    TTest,
    Entropy,
    Bhattacharyya,
    Roc,
    Wilcoxon,
    KruskalWallis,
    Fisher,
    Gini,
    Relieff,
    Laplacian,
    Cfs,
    Lasso,
    Ecfs,
    InfFs,
}

impl Method {
    pub const ALL: [Method; 14] = [
        Method::TTest,
        Method::Entropy,
        Method::Bhattacharyya,
        Method::Roc,
        Method::Wilcoxon,
        Method::KruskalWallis,
        Method::Fisher,
        Method::Gini,
        Method::Relieff,
        Method::Laplacian,
        Method::Cfs,
        Method::Lasso,
        Method::Ecfs,
        Method::InfFs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::TTest => "ttest",
            Method::Entropy => "entropy",
            Method::Bhattacharyya => "bhattacharyya",
            Method::Roc => "roc",
            Method::Wilcoxon => "wilcoxon",
            Method::KruskalWallis => "kruskal_wallis",
            Method::Fisher => "fisher",
            Method::Gini => "gini",
            Method::Relieff => "relieff",
            Method::Laplacian => "laplacian",
            Method::Cfs => "cfs",
            Method::Lasso => "lasso",
            Method::Ecfs => "ecfs",
            Method::InfFs => "inffs",
        }
    }

    pub fn from_name(name: &str) -> Result<Method> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.name() == name)
            .ok_or_else(|| {
                let valid: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
                FirError::UnknownMethod(format!("{name}; valid methods: {}", valid.join(", ")))
            })
    }

    /// Laplacian score ranks ascending (smaller is better); every other
    /// method ranks descending.
    pub fn ranks_ascending(&self) -> bool {
        matches!(self, Method::Laplacian)
    }

    /// Every method except the Laplacian score reads the labels.
    pub fn is_supervised(&self) -> bool {
        !matches!(self, Method::Laplacian)
    }
}

/// Tunable knobs shared by the rankers, all defaulted to the values the
/// batch surfaces use.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodParams {
    /// ReliefF neighbor count.
    pub relieff_k: usize,
    /// Laplacian-score kNN graph size.
    pub lap_k: usize,
    /// Heat-kernel bandwidth; `None` means the mean squared pairwise
    /// distance.
    pub lap_t: Option<f64>,
    /// Equal-frequency bins for the Gini reduction.
    pub gini_bins: usize,
    /// Lasso grid length.
    pub lasso_grid_count: usize,
    /// Ratio of the smallest lasso penalty to lambda_max.
    pub lasso_grid_min_ratio: f64,
    /// Mixing weight between relevancy and redundancy in the feature
    /// affinity.
    pub graph_alpha: f64,
    /// Variance floor used in denominators.
    pub epsilon: f64,
}

impl Default for MethodParams {
    fn default() -> Self {
        MethodParams {
            relieff_k: 10,
            lap_k: 5,
            lap_t: None,
            gini_bins: 10,
            lasso_grid_count: 100,
            lasso_grid_min_ratio: 1e-4,
            graph_alpha: 0.5,
            epsilon: 1e-12,
        }
    }
}

impl MethodParams {
    pub fn validate(&self) -> Result<()> {
        if self.relieff_k < 1 || self.lap_k < 1 || self.gini_bins < 1 || self.lasso_grid_count < 1 {
            return Err(FirError::ShapeError("all counts must be >= 1".to_string()));
        }
        if self.epsilon <= 0.0 {
            return Err(FirError::ShapeError("epsilon must be positive".to_string()));
        }
        if !(self.lasso_grid_min_ratio > 0.0 && self.lasso_grid_min_ratio < 1.0) {
            return Err(FirError::ShapeError(
                "lasso grid ratio must lie in (0, 1)".to_string(),
            ));
        }
        if let Some(t) = self.lap_t {
            if t <= 0.0 {
                return Err(FirError::ShapeError(
                    "bandwidth must be positive".to_string(),
                ));
            }
        }
        Ok(())
    }
}

/// Runs one method over the dataset and returns its ranking. Score-based
/// methods sort by score in the method's rank direction; order-based
/// methods (cfs, lasso) report their inclusion or activation order.
pub fn rank(ds: &Dataset, method: Method, params: &MethodParams) -> Result<Ranking> {
    params.validate()?;
    if method.is_supervised() && !ds.has_both_classes() {
        return Err(FirError::InsufficientClass(format!(
            "{} requires both classes in the dataset",
            method.name()
        )));
    }
    let per_feature = |f: &dyn Fn(usize) -> Result<f64>| -> Result<Vec<f64>> {
        (0..ds.feature_count()).map(f).collect()
    };
    let ranking = match method {
        Method::TTest
        | Method::Entropy
        | Method::Bhattacharyya
        | Method::Roc
        | Method::Wilcoxon => {
            let criterion = match method {
                Method::TTest => Criterion::TTest,
                Method::Entropy => Criterion::Entropy,
                Method::Bhattacharyya => Criterion::Bhattacharyya,
                Method::Roc => Criterion::Roc,
                _ => Criterion::Wilcoxon,
            };
            let scores = per_feature(&|j| {
                let (c0, c1) = ds.class_split(j);
                separability_score(&c0, &c1, criterion)
            })?;
            Ranking::from_scores(method.name(), scores, false)
        }
        Method::KruskalWallis => {
            let scores = per_feature(&|j| kruskal_wallis_score(&ds.column(j), ds.labels()))?;
            Ranking::from_scores(method.name(), scores, false)
        }
        Method::Fisher => {
            let scores = per_feature(&|j| fisher_score(&ds.column(j), ds.labels()))?;
            Ranking::from_scores(method.name(), scores, false)
        }
        Method::Gini => {
            let scores =
                per_feature(&|j| gini_score(&ds.column(j), ds.labels(), params.gini_bins))?;
            Ranking::from_scores(method.name(), scores, false)
        }
        Method::Relieff => {
            let scores = relieff_weights(ds, params.relieff_k)?;
            Ranking::from_scores(method.name(), scores, false)
        }
        Method::Laplacian => {
            let scores = laplacian_scores(ds, params.lap_k, params.lap_t)?;
            Ranking::from_scores(method.name(), scores, true)
        }
        Method::Cfs => cfs_ranking(ds),
        Method::Lasso => lasso_ranking_with(
            ds,
            None,
            params.lasso_grid_count,
            params.lasso_grid_min_ratio,
        )?,
        Method::Ecfs => ecfs_ranking(ds, params.graph_alpha)?,
        Method::InfFs => inffs_ranking(ds, params.graph_alpha)?,
    };
    Ok(ranking)
}

/// Writes rankings in the CSV surface format:
/// `method,rank_position,feature_index,feature_name,score` with 1-based
/// positions and indices. `comments` lines are embedded as `#` headers.
pub fn write_rankings_csv<W: Write>(
    mut w: W,
    rankings: &[Ranking],
    feature_names: &[String],
    comments: &[String],
) -> Result<()> {
    for line in comments {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "method,rank_position,feature_index,feature_name,score")?;
    for ranking in rankings {
        if ranking.feature_count() != feature_names.len() {
            return Err(FirError::ShapeError(format!(
                "{} names for a {}-feature ranking",
                feature_names.len(),
                ranking.feature_count()
            )));
        }
        for (pos, &idx) in ranking.order.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{}",
                ranking.method,
                pos + 1,
                idx,
                feature_names[idx - 1],
                ranking.scores[idx - 1]
            )?;
        }
    }
    Ok(())
}

/// Reads the ranking CSV format back; blocks are grouped by method in
/// order of first appearance.
pub fn read_rankings_csv<R: std::io::Read>(r: R, origin: &str) -> Result<Vec<Ranking>> {
    let reader = BufReader::new(r);
    let mut raw: Vec<(String, usize, usize, f64)> = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if !trimmed.starts_with("method,") {
                return Err(FirError::ParseError {
                    path: origin.to_string(),
                    detail: format!("line {}: missing ranking header", lineno + 1),
                });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 5 {
            return Err(FirError::ParseError {
                path: origin.to_string(),
                detail: format!(
                    "line {}: expected 5 fields, got {}",
                    lineno + 1,
                    fields.len()
                ),
            });
        }
        let bad = |what: &str| FirError::ParseError {
            path: origin.to_string(),
            detail: format!("line {}: bad {what}", lineno + 1),
        };
        let position: usize = fields[1].trim().parse().map_err(|_| bad("rank_position"))?;
        let index: usize = fields[2].trim().parse().map_err(|_| bad("feature_index"))?;
        let score: f64 = if fields[4].trim().is_empty() {
            0.0
        } else {
            fields[4].trim().parse().map_err(|_| bad("score"))?
        };
        raw.push((fields[0].trim().to_string(), position, index, score));
    }
    if raw.is_empty() {
        return Err(FirError::ParseError {
            path: origin.to_string(),
            detail: "no ranking rows".to_string(),
        });
    }

    let mut methods: Vec<String> = Vec::new();
    for (m, _, _, _) in &raw {
        if !methods.contains(m) {
            methods.push(m.clone());
        }
    }
    let mut out = Vec::new();
    for m in methods {
        let mut rows: Vec<(usize, usize, f64)> = raw
            .iter()
            .filter(|(method, _, _, _)| *method == m)
            .map(|&(_, p, i, s)| (p, i, s))
            .collect();
        rows.sort_by_key(|&(p, _, _)| p);
        let d = rows.len();
        for (expect, &(p, _, _)) in rows.iter().enumerate() {
            if p != expect + 1 {
                return Err(FirError::ParseError {
                    path: origin.to_string(),
                    detail: format!("method {m}: rank positions must cover 1..={d}"),
                });
            }
        }
        let order: Vec<usize> = rows.iter().map(|&(_, i, _)| i).collect();
        let mut scores = vec![0.0; d];
        for &(_, i, s) in &rows {
            if i == 0 || i > d {
                return Err(FirError::ParseError {
                    path: origin.to_string(),
                    detail: format!("method {m}: feature index {i} outside 1..={d}"),
                });
            }
            scores[i - 1] = s;
        }
        out.push(
            Ranking::from_order(&m, order, scores).map_err(|e| FirError::ParseError {
                path: origin.to_string(),
                detail: format!("method {m}: {e}"),
            })?,
        );
    }
    Ok(out)
}
