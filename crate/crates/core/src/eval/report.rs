//! The effectiveness metric eff = m / n_prefix and the per-method report
//! table built from it.

use std::collections::BTreeSet;
use std::io::Write;

use crate::dataset::{EffResult, Ranking};
use crate::error::FirError;
use crate::Result;

/// How quickly a ranking covers the optimal subset: m features are all
/// contained in the first n_prefix ranked ones, eff = m / n_prefix.
pub fn effectiveness(ranking: &Ranking, optimal_subset: &[usize]) -> Result<EffResult> {
    if optimal_subset.is_empty() {
        return Err(FirError::EmptyInput("optimal subset".to_string()));
    }
    let d = ranking.feature_count();
    let unique: BTreeSet<usize> = optimal_subset.iter().copied().collect();
    let mut n_prefix = 0usize;
    for &idx in &unique {
        if idx == 0 || idx > d {
            return Err(FirError::InvalidIndex { index: idx, d });
        }
        let pos = ranking
            .position_of(idx)
            .expect("a valid permutation covers every index");
        n_prefix = n_prefix.max(pos);
    }
    Ok(EffResult {
        m: unique.len(),
        n_prefix,
    })
}

/// One line of the report table.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub method: String,
    pub order: Vec<usize>,
    pub eff: EffResult,
}

/// Per-method report: the full ranked index list and the eff fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub optimal_subset: Vec<usize>,
    pub rows: Vec<ReportRow>,
}

/// Builds the table; every ranking must cover the same feature count.
pub fn build_report(rankings: &[Ranking], optimal_subset: &[usize]) -> Result<ReportTable> {
    if rankings.is_empty() {
        return Err(FirError::EmptyInput("rankings".to_string()));
    }
    let d = rankings[0].feature_count();
    for r in rankings {
        if r.feature_count() != d {
            return Err(FirError::ShapeError(format!(
                "ranking {} covers {} features, expected {d}",
                r.method,
                r.feature_count()
            )));
        }
    }
    let optimal: Vec<usize> = BTreeSet::from_iter(optimal_subset.iter().copied())
        .into_iter()
        .collect();
    let rows = rankings
        .iter()
        .map(|r| {
            Ok(ReportRow {
                method: r.method.clone(),
                order: r.order.clone(),
                eff: effectiveness(r, &optimal)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReportTable {
        optimal_subset: optimal,
        rows,
    })
}

impl ReportTable {
    /// CSV rendering: `method,ranked_indices,eff`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# optimal_subset = {}",
            join_indices(&self.optimal_subset, ",")
        )?;
        writeln!(w, "method,ranked_indices,eff")?;
        for row in &self.rows {
            writeln!(
                w,
                "{},{},{}",
                row.method,
                join_indices(&row.order, " "),
                row.eff.fraction()
            )?;
        }
        Ok(())
    }

    /// Aligned plain-text rendering.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        let method_width = self
            .rows
            .iter()
            .map(|r| r.method.len())
            .max()
            .unwrap_or(6)
            .max("method".len());
        let order_width = self
            .rows
            .iter()
            .map(|r| join_indices(&r.order, " ").len())
            .max()
            .unwrap_or(5)
            .max("ranked features".len());
        writeln!(
            w,
            "optimal subset: {}",
            join_indices(&self.optimal_subset, " ")
        )?;
        writeln!(
            w,
            "{:<method_width$}  {:<order_width$}  eff",
            "method", "ranked features"
        )?;
        for row in &self.rows {
            writeln!(
                w,
                "{:<method_width$}  {:<order_width$}  {}",
                row.method,
                join_indices(&row.order, " "),
                row.eff.fraction()
            )?;
        }
        Ok(())
    }
}

fn join_indices(indices: &[usize], sep: &str) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}
