//! Grey-level co-occurrence matrix construction and the three texture
//! features computed from it.

use super::LesionImage;
use crate::error::FirError;
use crate::Result;

pub const DEFAULT_LEVELS: usize = 32;
pub const DEFAULT_DISTANCE: usize = 1;

/// Pair direction. 0 degrees pairs each pixel with the one `d` columns to
/// its right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlcmAngle {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl GlcmAngle {
    pub fn from_degrees(deg: u32) -> Option<GlcmAngle> {
        match deg {
            0 => Some(GlcmAngle::Deg0),
            45 => Some(GlcmAngle::Deg45),
            90 => Some(GlcmAngle::Deg90),
            135 => Some(GlcmAngle::Deg135),
            _ => None,
        }
    }

    pub fn degrees(&self) -> u32 {
        match self {
            GlcmAngle::Deg0 => 0,
            GlcmAngle::Deg45 => 45,
            GlcmAngle::Deg90 => 90,
            GlcmAngle::Deg135 => 135,
        }
    }

    fn offset(&self, d: usize) -> (i64, i64) {
        let d = d as i64;
        match self {
            GlcmAngle::Deg0 => (0, d),
            GlcmAngle::Deg45 => (-d, d),
            GlcmAngle::Deg90 => (-d, 0),
            GlcmAngle::Deg135 => (-d, -d),
        }
    }
}

/// L x L matrix of co-occurrence relative frequencies (ordered pairs,
/// single offset; entries sum to 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    table: Vec<f64>,
    levels: usize,
    distance: usize,
    angle: GlcmAngle,
}

impl Glcm {
    /// Builds directly from relative frequencies; used by tests and by
    /// callers with precomputed tables. Entries must be non-negative and
    /// sum to 1 within 1e-12.
    pub fn from_table(
        table: Vec<f64>,
        levels: usize,
        distance: usize,
        angle: GlcmAngle,
    ) -> Result<Glcm> {
        if table.len() != levels * levels {
            return Err(FirError::ShapeError(format!(
                "{} entries for a {levels}x{levels} table",
                table.len()
            )));
        }
        let mut sum = 0.0;
        for &p in &table {
            if p.is_nan() || p < 0.0 {
                return Err(FirError::InvalidValue { row: 0, col: 0 });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(FirError::ShapeError(format!(
                "co-occurrence entries sum to {sum}, expected 1"
            )));
        }
        Ok(Glcm {
            table,
            levels,
            distance,
            angle,
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn angle(&self) -> GlcmAngle {
        self.angle
    }

    /// Relative frequency for 0-based level pair (i, j).
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.levels + j]
    }

    /// Marginal row probabilities p_x.
    pub fn row_marginals(&self) -> Vec<f64> {
        (0..self.levels)
            .map(|i| (0..self.levels).map(|j| self.at(i, j)).sum())
            .collect()
    }

    /// Marginal column probabilities p_y.
    pub fn col_marginals(&self) -> Vec<f64> {
        (0..self.levels)
            .map(|j| (0..self.levels).map(|i| self.at(i, j)).sum())
            .collect()
    }
}

/// Quantizes the masked intensities into `levels` bins over the region's
/// own [min, max] (a constant region maps entirely to the first level) and
/// counts ordered pairs at the requested offset, both ends inside the mask.
pub fn build_glcm(
    image: &LesionImage,
    levels: usize,
    distance: usize,
    angle: GlcmAngle,
) -> Result<Glcm> {
    if levels < 2 {
        return Err(FirError::ShapeError(
            "need at least 2 grey levels".to_string(),
        ));
    }
    let (h, w) = (image.height(), image.width());
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for r in 0..h {
        for c in 0..w {
            if image.in_mask(r, c) {
                let v = image.pixel(r, c);
                min = min.min(v);
                max = max.max(v);
            }
        }
    }
    let range = max - min;
    let quantize = |v: f64| -> usize {
        if range <= 0.0 {
            0
        } else {
            (((v - min) / range * levels as f64).floor() as usize).min(levels - 1)
        }
    };

    let (dr, dc) = angle.offset(distance);
    let mut counts = vec![0u64; levels * levels];
    let mut total = 0u64;
    for r in 0..h {
        for c in 0..w {
            if !image.in_mask(r, c) {
                continue;
            }
            let nr = r as i64 + dr;
            let nc = c as i64 + dc;
            if nr < 0 || nc < 0 || nr >= h as i64 || nc >= w as i64 {
                continue;
            }
            let (nr, nc) = (nr as usize, nc as usize);
            if !image.in_mask(nr, nc) {
                continue;
            }
            let i = quantize(image.pixel(r, c));
            let j = quantize(image.pixel(nr, nc));
            counts[i * levels + j] += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(FirError::EmptyGlcm);
    }
    let table = counts.iter().map(|&k| k as f64 / total as f64).collect();
    Ok(Glcm {
        table,
        levels,
        distance,
        angle,
    })
}

/// The three texture features, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextureFeatures {
    pub contrast: f64,
    pub correlation: f64,
    pub entropy: f64,
}

/// Contrast sum |i-j|^2 P(i,j); correlation from the marginal means and
/// standard deviations (0 when either marginal is degenerate); entropy
/// -sum P log2 P with 0 log 0 = 0.
pub fn texture_features(glcm: &Glcm) -> TextureFeatures {
    let levels = glcm.levels();
    let px = glcm.row_marginals();
    let py = glcm.col_marginals();

    // level indices enter as 1-based values; correlation is shift-invariant
    let mean = |p: &[f64]| -> f64 { p.iter().enumerate().map(|(i, &q)| (i + 1) as f64 * q).sum() };
    let mu_x = mean(&px);
    let mu_y = mean(&py);
    let var = |p: &[f64], mu: f64| -> f64 {
        p.iter()
            .enumerate()
            .map(|(i, &q)| {
                let d = (i + 1) as f64 - mu;
                d * d * q
            })
            .sum()
    };
    let sigma_x = var(&px, mu_x).sqrt();
    let sigma_y = var(&py, mu_y).sqrt();

    let mut contrast = 0.0;
    let mut cross = 0.0;
    let mut entropy = 0.0;
    for i in 0..levels {
        for j in 0..levels {
            let p = glcm.at(i, j);
            if p == 0.0 {
                continue;
            }
            let diff = i as f64 - j as f64;
            contrast += diff * diff * p;
            cross += (i + 1) as f64 * (j + 1) as f64 * p;
            entropy -= p * p.log2();
        }
    }
    let correlation = if sigma_x > 0.0 && sigma_y > 0.0 {
        (cross - mu_x * mu_y) / (sigma_x * sigma_y)
    } else {
        0.0
    };
    TextureFeatures {
        contrast,
        correlation,
        entropy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::{BinaryMask, LesionImage};

    fn image_1x4() -> LesionImage {
        // 1x4 strip is below the usual mask size floor; build through the
        // unchecked constructor reserved for tests
        LesionImage::for_tests(
            vec![vec![0.0, 255.0, 0.0, 255.0]],
            BinaryMask::from_fn(1, 4, |_, _| true).unwrap(),
        )
    }

    #[test]
    fn alternating_strip_pairs() {
        let img = image_1x4();
        let g = build_glcm(&img, 2, 1, GlcmAngle::Deg0).unwrap();
        assert!((g.at(0, 1) - 2.0 / 3.0).abs() < 1e-12);
        assert!((g.at(1, 0) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(g.at(0, 0), 0.0);
        assert_eq!(g.at(1, 1), 0.0);
    }

    #[test]
    fn constant_region_collapses_to_first_level() {
        let img = LesionImage::for_tests(
            vec![vec![7.0; 3]; 3],
            BinaryMask::from_fn(3, 3, |_, _| true).unwrap(),
        );
        let g = build_glcm(&img, 32, 1, GlcmAngle::Deg0).unwrap();
        assert!((g.at(0, 0) - 1.0).abs() < 1e-12);
        let t = texture_features(&g);
        assert_eq!(t.contrast, 0.0);
        assert_eq!(t.correlation, 0.0);
        assert_eq!(t.entropy, 0.0);
    }

    #[test]
    fn entries_sum_to_one() {
        let img = image_1x4();
        let g = build_glcm(&img, 2, 1, GlcmAngle::Deg0).unwrap();
        let sum: f64 = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| g.at(i, j))
            .sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_valid_pair_is_an_error() {
        let img = LesionImage::for_tests(
            vec![vec![1.0], vec![2.0]],
            BinaryMask::from_fn(2, 1, |_, _| true).unwrap(),
        );
        assert!(matches!(
            build_glcm(&img, 2, 1, GlcmAngle::Deg0),
            Err(FirError::EmptyGlcm)
        ));
    }

    #[test]
    fn two_off_diagonal_cells() {
        let mut table = vec![0.0; 4];
        table[1] = 0.5; // P(1,2)
        table[2] = 0.5; // P(2,1)
        let g = Glcm::from_table(table, 2, 1, GlcmAngle::Deg0).unwrap();
        let t = texture_features(&g);
        assert!((t.contrast - 1.0).abs() < 1e-12);
        assert!((t.entropy - 1.0).abs() < 1e-12);
        assert!((t.correlation + 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_table_maximizes_entropy() {
        let levels = 8;
        let table = vec![1.0 / (levels * levels) as f64; levels * levels];
        let g = Glcm::from_table(table, levels, 1, GlcmAngle::Deg0).unwrap();
        let t = texture_features(&g);
        assert!((t.entropy - 2.0 * (levels as f64).log2()).abs() < 1e-9);
    }

    #[test]
    fn marginals_sum_to_one() {
        let img = image_1x4();
        let g = build_glcm(&img, 2, 1, GlcmAngle::Deg0).unwrap();
        assert!((g.row_marginals().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((g.col_marginals().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
