//! Extraction of the fifteen lesion features (seven intensity statistics,
//! five shape descriptors, three co-occurrence texture measures) from a
//! grayscale image and an aligned binary mask.

pub mod glcm;
pub mod intensity;
pub mod io;
pub mod shape;

pub use glcm::{build_glcm, texture_features, Glcm, GlcmAngle, TextureFeatures};
pub use intensity::{intensity_features, IntensityFeatures};
pub use shape::{fit_moment_ellipse, shape_features, MomentEllipse, ShapeFeatures};

use crate::error::FirError;
use crate::Result;

/// Minimum number of foreground pixels for a usable lesion mask.
pub const MIN_MASK_PIXELS: usize = 16;

/// H x W binary grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMask {
    data: Vec<bool>,
    height: usize,
    width: usize,
}

impl BinaryMask {
    pub fn from_fn<F: Fn(usize, usize) -> bool>(
        height: usize,
        width: usize,
        f: F,
    ) -> Result<BinaryMask> {
        if height == 0 || width == 0 {
            return Err(FirError::EmptyInput("mask".to_string()));
        }
        let mut data = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Ok(BinaryMask {
            data,
            height,
            width,
        })
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<BinaryMask> {
        let h = rows.len();
        let w = rows.first().map(|r| r.len()).unwrap_or(0);
        if h == 0 || w == 0 {
            return Err(FirError::EmptyInput("mask".to_string()));
        }
        for row in rows {
            if row.len() != w {
                return Err(FirError::ShapeError("ragged mask rows".to_string()));
            }
        }
        BinaryMask::from_fn(h, w, |r, c| rows[r][c])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.width + c]
    }

    /// Bounds-checked foreground test with signed coordinates.
    pub fn contains(&self, r: i64, c: i64) -> bool {
        r >= 0
            && c >= 0
            && (r as usize) < self.height
            && (c as usize) < self.width
            && self.get(r as usize, c as usize)
    }

    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn foreground_coords(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.height {
            for c in 0..self.width {
                if self.get(r, c) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// First foreground pixel in raster order.
    pub fn first_foreground(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|&b| b)
            .map(|i| (i / self.width, i % self.width))
    }

    /// True when every foreground pixel belongs to one 8-connected blob.
    pub fn is_single_component(&self) -> bool {
        let total = self.foreground_count();
        let start = match self.first_foreground() {
            Some(s) => s,
            None => return false,
        };
        let mut seen = vec![false; self.data.len()];
        let mut queue = vec![start];
        seen[start.0 * self.width + start.1] = true;
        let mut visited = 0usize;
        while let Some((r, c)) = queue.pop() {
            visited += 1;
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let nr = r as i64 + dr;
                    let nc = c as i64 + dc;
                    if self.contains(nr, nc) {
                        let idx = nr as usize * self.width + nc as usize;
                        if !seen[idx] {
                            seen[idx] = true;
                            queue.push((nr as usize, nc as usize));
                        }
                    }
                }
            }
        }
        visited == total
    }
}

/// Grayscale intensity grid with an aligned lesion mask. The mask must
/// cover at least [`MIN_MASK_PIXELS`] pixels and form a single 8-connected
/// component.
#[derive(Debug, Clone, PartialEq)]
pub struct LesionImage {
    pixels: Vec<f64>,
    mask: BinaryMask,
    height: usize,
    width: usize,
    pixel_spacing: Option<f64>,
}

impl LesionImage {
    pub fn new(
        pixels: Vec<Vec<f64>>,
        mask: BinaryMask,
        pixel_spacing: Option<f64>,
    ) -> Result<LesionImage> {
        let h = pixels.len();
        let w = pixels.first().map(|r| r.len()).unwrap_or(0);
        if h == 0 || w == 0 {
            return Err(FirError::EmptyInput("image".to_string()));
        }
        if h != mask.height() || w != mask.width() {
            return Err(FirError::InvalidMask(format!(
                "mask {}x{} does not match image {}x{}",
                mask.height(),
                mask.width(),
                h,
                w
            )));
        }
        if mask.foreground_count() < MIN_MASK_PIXELS {
            return Err(FirError::InvalidMask(format!(
                "only {} foreground pixels, need {}",
                mask.foreground_count(),
                MIN_MASK_PIXELS
            )));
        }
        if !mask.is_single_component() {
            return Err(FirError::InvalidMask(
                "foreground is not a single 8-connected component".to_string(),
            ));
        }
        let mut flat = Vec::with_capacity(h * w);
        for (r, row) in pixels.iter().enumerate() {
            if row.len() != w {
                return Err(FirError::ShapeError("ragged image rows".to_string()));
            }
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(FirError::InvalidValue { row: r, col: c });
                }
                flat.push(v);
            }
        }
        Ok(LesionImage {
            pixels: flat,
            mask,
            height: h,
            width: w,
            pixel_spacing,
        })
    }

    /// Test-only constructor that skips the mask-size and connectivity
    /// checks, for exercising the low-level operators on tiny grids.
    #[cfg(test)]
    pub(crate) fn for_tests(pixels: Vec<Vec<f64>>, mask: BinaryMask) -> LesionImage {
        let h = pixels.len();
        let w = pixels[0].len();
        LesionImage {
            pixels: pixels.into_iter().flatten().collect(),
            mask,
            height: h,
            width: w,
            pixel_spacing: None,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixel(&self, r: usize, c: usize) -> f64 {
        self.pixels[r * self.width + c]
    }

    pub fn in_mask(&self, r: usize, c: usize) -> bool {
        self.mask.get(r, c)
    }

    pub fn mask(&self) -> &BinaryMask {
        &self.mask
    }

    pub fn pixel_spacing(&self) -> Option<f64> {
        self.pixel_spacing
    }

    /// Masked intensities in raster order.
    pub fn masked_pixels(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.mask.foreground_count());
        for r in 0..self.height {
            for c in 0..self.width {
                if self.mask.get(r, c) {
                    out.push(self.pixel(r, c));
                }
            }
        }
        out
    }
}

/// The fifteen features in reporting order; field k corresponds to
/// feature index k+1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub i_mean: f64,
    pub i_median: f64,
    pub i_std_dev: f64,
    pub i_maximum: f64,
    pub i_minimum: f64,
    pub i_kurtosis: f64,
    pub i_skewness: f64,
    pub s_area: f64,
    pub s_perimeter: f64,
    pub s_circularity: f64,
    pub s_elongation: f64,
    pub s_form: f64,
    pub t_contrast: f64,
    pub t_correlation: f64,
    pub t_entropy: f64,
}

impl FeatureVector {
    pub const NAMES: [&'static str; 15] = [
        "i_mean",
        "i_median",
        "i_std_dev",
        "i_maximum",
        "i_minimum",
        "i_kurtosis",
        "i_skewness",
        "s_area",
        "s_perimeter",
        "s_circularity",
        "s_elongation",
        "s_form",
        "t_contrast",
        "t_correlation",
        "t_entropy",
    ];

    pub fn as_array(&self) -> [f64; 15] {
        [
            self.i_mean,
            self.i_median,
            self.i_std_dev,
            self.i_maximum,
            self.i_minimum,
            self.i_kurtosis,
            self.i_skewness,
            self.s_area,
            self.s_perimeter,
            self.s_circularity,
            self.s_elongation,
            self.s_form,
            self.t_contrast,
            self.t_correlation,
            self.t_entropy,
        ]
    }
}

/// Runs the full fifteen-feature extraction with the default co-occurrence
/// parameters (32 levels, distance 1, 0 degrees).
pub fn extract_all(image: &LesionImage) -> Result<FeatureVector> {
    let intensity = intensity_features(&image.masked_pixels())?;
    let shape = shape_features(image.mask(), image.pixel_spacing())?;
    let g = build_glcm(
        image,
        glcm::DEFAULT_LEVELS,
        glcm::DEFAULT_DISTANCE,
        GlcmAngle::Deg0,
    )?;
    let texture = texture_features(&g);
    Ok(FeatureVector {
        i_mean: intensity.mean,
        i_median: intensity.median,
        i_std_dev: intensity.std_dev,
        i_maximum: intensity.maximum,
        i_minimum: intensity.minimum,
        i_kurtosis: intensity.kurtosis,
        i_skewness: intensity.skewness,
        s_area: shape.area,
        s_perimeter: shape.perimeter,
        s_circularity: shape.circularity,
        s_elongation: shape.elongation,
        s_form: shape.form,
        t_contrast: texture.contrast,
        t_correlation: texture.correlation,
        t_entropy: texture.entropy,
    })
}
