//! Shared domain types: validated datasets, rankings, the effectiveness
//! metric and seeded randomness.

use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::FirError;
use crate::Result;

/// Immutable n x d feature matrix with binary labels and 1-based feature
/// names. Construction goes through [`validate_dataset`], so a `Dataset`
/// always satisfies: n >= 2, d >= 1, finite entries, labels in {0, 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>, // row-major n x d
    labels: Vec<u8>,
    feature_names: Vec<String>,
    n: usize,
    d: usize,
}

impl Dataset {
    pub fn sample_count(&self) -> usize {
        self.n
    }

    pub fn feature_count(&self) -> usize {
        self.d
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Feature name for a 1-based index.
    pub fn feature_name(&self, index_1b: usize) -> &str {
        &self.feature_names[index_1b - 1]
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.features[row * self.d + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.features[row * self.d..(row + 1) * self.d]
    }

    /// Copies column `col` (0-based).
    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i, col)).collect()
    }

    /// Splits column `col` by class: (values with label 0, values with label 1).
    pub fn class_split(&self, col: usize) -> (Vec<f64>, Vec<f64>) {
        let mut c0 = Vec::new();
        let mut c1 = Vec::new();
        for i in 0..self.n {
            if self.labels[i] == 0 {
                c0.push(self.value(i, col));
            } else {
                c1.push(self.value(i, col));
            }
        }
        (c0, c1)
    }

    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        (self.n - pos, pos)
    }

    pub fn has_both_classes(&self) -> bool {
        let (neg, pos) = self.class_counts();
        neg > 0 && pos > 0
    }

    /// New dataset with the rows reordered; used by permutation tests.
    pub fn permuted_rows(&self, order: &[usize]) -> Result<Dataset> {
        if order.len() != self.n {
            return Err(FirError::ShapeError(format!(
                "permutation length {} != sample count {}",
                order.len(),
                self.n
            )));
        }
        let rows: Vec<Vec<f64>> = order.iter().map(|&i| self.row(i).to_vec()).collect();
        let labels: Vec<u8> = order.iter().map(|&i| self.labels[i]).collect();
        validate_dataset_named(
            &rows,
            &labels.iter().map(|&l| l as f64).collect::<Vec<_>>(),
            self.feature_names.clone(),
        )
    }

    /// New dataset with an extra column appended (used by collinearity checks).
    pub fn with_extra_column(&self, values: &[f64], name: &str) -> Result<Dataset> {
        if values.len() != self.n {
            return Err(FirError::ShapeError(format!(
                "column length {} != sample count {}",
                values.len(),
                self.n
            )));
        }
        let mut rows = Vec::with_capacity(self.n);
        for (i, &v) in values.iter().enumerate() {
            let mut r = self.row(i).to_vec();
            r.push(v);
            rows.push(r);
        }
        let mut names = self.feature_names.clone();
        names.push(name.to_string());
        validate_dataset_named(
            &rows,
            &self.labels.iter().map(|&l| l as f64).collect::<Vec<_>>(),
            names,
        )
    }

    /// Writes the CSV interchange format: header `label,<name1>,...`, one
    /// row per sample. Values use Rust's shortest round-trip notation, so
    /// re-reading reproduces every f64 exactly.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "label")?;
        for name in &self.feature_names {
            write!(w, ",{name}")?;
        }
        writeln!(w)?;
        for i in 0..self.n {
            write!(w, "{}", self.labels[i])?;
            for j in 0..self.d {
                write!(w, ",{}", self.value(i, j))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write_csv(&mut f)
    }

    /// Reads the CSV interchange format. Lines starting with `#` are
    /// treated as comments (output files embed their configuration there).
    pub fn read_csv<R: std::io::Read>(r: R, origin: &str) -> Result<Dataset> {
        let reader = BufReader::new(r);
        let mut names: Option<Vec<String>> = None;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut labels: Vec<f64> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').collect();
            match names {
                None => {
                    if fields.is_empty() || fields[0] != "label" {
                        return Err(FirError::ParseError {
                            path: origin.to_string(),
                            detail: format!("line {}: header must start with `label`", lineno + 1),
                        });
                    }
                    names = Some(fields[1..].iter().map(|s| s.to_string()).collect());
                }
                Some(ref names) => {
                    if fields.len() != names.len() + 1 {
                        return Err(FirError::ParseError {
                            path: origin.to_string(),
                            detail: format!(
                                "line {}: expected {} fields, got {}",
                                lineno + 1,
                                names.len() + 1,
                                fields.len()
                            ),
                        });
                    }
                    let parse = |s: &str| -> Result<f64> {
                        s.trim().parse::<f64>().map_err(|e| FirError::ParseError {
                            path: origin.to_string(),
                            detail: format!("line {}: {e}", lineno + 1),
                        })
                    };
                    labels.push(parse(fields[0])?);
                    let row: Result<Vec<f64>> = fields[1..].iter().map(|s| parse(s)).collect();
                    rows.push(row?);
                }
            }
        }
        let names = names.ok_or_else(|| FirError::ParseError {
            path: origin.to_string(),
            detail: "missing header row".to_string(),
        })?;
        validate_dataset_named(&rows, &labels, names)
    }

    pub fn read_csv_path(path: &Path) -> Result<Dataset> {
        let f = std::fs::File::open(path).map_err(|e| FirError::ParseError {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
        Dataset::read_csv(f, &path.display().to_string())
    }
}

/// Validates a raw matrix and labels into a [`Dataset`], generating
/// feature names `f1..fd`.
pub fn validate_dataset(rows: &[Vec<f64>], labels: &[f64]) -> Result<Dataset> {
    let d = rows.first().map(|r| r.len()).unwrap_or(0);
    let names = (1..=d).map(|j| format!("f{j}")).collect();
    validate_dataset_named(rows, labels, names)
}

/// Validation with explicit feature names.
pub fn validate_dataset_named(
    rows: &[Vec<f64>],
    labels: &[f64],
    feature_names: Vec<String>,
) -> Result<Dataset> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(FirError::EmptyInput("feature matrix".to_string()));
    }
    let d = rows[0].len();
    if labels.len() != rows.len() {
        return Err(FirError::ShapeError(format!(
            "{} labels for {} rows",
            labels.len(),
            rows.len()
        )));
    }
    if rows.len() < 2 {
        return Err(FirError::InsufficientSamples {
            needed: 2,
            got: rows.len(),
        });
    }
    if feature_names.len() != d {
        return Err(FirError::ShapeError(format!(
            "{} feature names for {} columns",
            feature_names.len(),
            d
        )));
    }
    let mut features = Vec::with_capacity(rows.len() * d);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != d {
            return Err(FirError::ShapeError(format!(
                "row {} has {} columns, expected {}",
                i,
                row.len(),
                d
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(FirError::InvalidValue { row: i, col: j });
            }
            features.push(v);
        }
    }
    let mut lab = Vec::with_capacity(labels.len());
    for (i, &l) in labels.iter().enumerate() {
        if l == 0.0 {
            lab.push(0u8);
        } else if l == 1.0 {
            lab.push(1u8);
        } else {
            return Err(FirError::InvalidLabel { row: i, value: l });
        }
    }
    Ok(Dataset {
        features,
        labels: lab,
        feature_names,
        n: rows.len(),
        d,
    })
}

/// A permutation of the feature indices (most important first) together
/// with per-feature scores and the method that produced it.
///
/// `order` holds 1-based feature indices; `scores[j]` belongs to feature
/// `j + 1`, not to `order[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub method: String,
    pub order: Vec<usize>,
    pub scores: Vec<f64>,
}

impl Ranking {
    /// Builds a ranking from per-feature scores. `ascending` selects the
    /// rank direction (smaller-is-better methods rank ascending). Ties
    /// break by ascending feature index.
    pub fn from_scores(method: &str, scores: Vec<f64>, ascending: bool) -> Ranking {
        let mut order: Vec<usize> = (1..=scores.len()).collect();
        order.sort_by(|&a, &b| {
            let (sa, sb) = (scores[a - 1], scores[b - 1]);
            let primary = if ascending {
                sa.total_cmp(&sb)
            } else {
                sb.total_cmp(&sa)
            };
            primary.then(a.cmp(&b))
        });
        Ranking {
            method: method.to_string(),
            order,
            scores,
        }
    }

    /// Builds a ranking whose order was produced directly (inclusion or
    /// activation order). Verifies the permutation invariant.
    pub fn from_order(method: &str, order: Vec<usize>, scores: Vec<f64>) -> Result<Ranking> {
        let d = order.len();
        if scores.len() != d {
            return Err(FirError::ShapeError(format!(
                "{} scores for {} ranked features",
                scores.len(),
                d
            )));
        }
        let mut seen = vec![false; d];
        for &idx in &order {
            if idx == 0 || idx > d || seen[idx - 1] {
                return Err(FirError::ShapeError(format!(
                    "order is not a permutation of 1..={d}"
                )));
            }
            seen[idx - 1] = true;
        }
        Ok(Ranking {
            method: method.to_string(),
            order,
            scores,
        })
    }

    pub fn feature_count(&self) -> usize {
        self.order.len()
    }

    /// 1-based position of a 1-based feature index within the ranking.
    pub fn position_of(&self, index_1b: usize) -> Option<usize> {
        self.order
            .iter()
            .position(|&f| f == index_1b)
            .map(|p| p + 1)
    }
}

/// The effectiveness of a ranking against an optimal subset:
/// `m` optimal features are covered by the first `n_prefix` ranked ones,
/// giving the rational eff = m / n_prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EffResult {
    pub m: usize,
    pub n_prefix: usize,
}

impl EffResult {
    pub fn value(&self) -> f64 {
        self.m as f64 / self.n_prefix as f64
    }

    /// The literal fraction, e.g. `3/4`.
    pub fn fraction(&self) -> String {
        format!("{}/{}", self.m, self.n_prefix)
    }
}

impl fmt::Display for EffResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n_prefix)
    }
}

/// Seed for every randomized operation; identical seeds give bit-identical
/// outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formed_input_validates() {
        let rows = vec![
            vec![1.0, 2.0],
            vec![3.0, 4.0],
            vec![5.0, 6.0],
            vec![7.0, 8.0],
        ];
        let ds = validate_dataset(&rows, &[0.0, 0.0, 1.0, 1.0]).unwrap();
        assert_eq!(ds.sample_count(), 4);
        assert_eq!(ds.feature_count(), 2);
        assert_eq!(ds.feature_names(), &["f1".to_string(), "f2".to_string()]);
    }

    #[test]
    fn nan_is_rejected() {
        let rows = vec![vec![1.0, f64::NAN], vec![3.0, 4.0]];
        match validate_dataset(&rows, &[0.0, 1.0]) {
            Err(FirError::InvalidValue { row: 0, col: 1 }) => {}
            other => panic!("expected InvalidValue, got {other:?}"),
        }
    }

    #[test]
    fn bad_label_is_rejected() {
        let rows = vec![vec![1.0], vec![2.0], vec![3.0]];
        match validate_dataset(&rows, &[0.0, 2.0, 1.0]) {
            Err(FirError::InvalidLabel { row: 1, value }) => assert_eq!(value, 2.0),
            other => panic!("expected InvalidLabel, got {other:?}"),
        }
    }

    #[test]
    fn empty_matrix_is_rejected() {
        match validate_dataset(&[], &[]) {
            Err(FirError::EmptyInput(_)) => {}
            other => panic!("expected EmptyInput, got {other:?}"),
        }
    }

    #[test]
    fn csv_round_trip_is_value_identical() {
        let rows = vec![
            vec![0.1, 1.0 / 3.0, 1e-17],
            vec![-2.5, std::f64::consts::PI, 9.999999999e8],
        ];
        let ds = validate_dataset(&rows, &[0.0, 1.0]).unwrap();
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        let back = Dataset::read_csv(&buf[..], "mem").unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn ranking_from_scores_breaks_ties_by_index() {
        let r = Ranking::from_scores("t", vec![1.0, 2.0, 2.0, 0.0], false);
        assert_eq!(r.order, vec![2, 3, 1, 4]);
    }

    #[test]
    fn ranking_from_order_rejects_non_permutation() {
        assert!(Ranking::from_order("t", vec![1, 1, 2], vec![0.0; 3]).is_err());
        assert!(Ranking::from_order("t", vec![1, 2, 4], vec![0.0; 3]).is_err());
    }

    #[test]
    fn eff_fraction_prints_literally() {
        let e = EffResult { m: 3, n_prefix: 4 };
        assert_eq!(e.fraction(), "3/4");
        assert!((e.value() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn same_seed_same_stream() {
        use rand_chacha::rand_core::RngCore;
        let mut a = RngSeed(7).rng();
        let mut b = RngSeed(7).rng();
        assert_eq!(a.next_u64(), b.next_u64());
    }
}
