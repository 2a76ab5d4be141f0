//! Region shape description: moment-based ellipse axes, traced perimeter,
//! and the five shape features derived from them.

use super::BinaryMask;
use crate::error::FirError;
use crate::Result;

/// Major/minor axis lengths of the ellipse sharing the region's second
/// central moments, plus the centroid as (row, col).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEllipse {
    pub major: f64,
    pub minor: f64,
    pub centroid: (f64, f64),
}

/// Fits the moment ellipse. Each pixel contributes its center coordinate
/// plus a 1/12 variance term (the second moment of a unit square), which
/// keeps single-row and single-column regions away from zero axes.
pub fn fit_moment_ellipse(mask: &BinaryMask) -> Result<MomentEllipse> {
    let coords = mask.foreground_coords();
    if coords.is_empty() {
        return Err(FirError::InvalidMask("empty mask".to_string()));
    }
    let n = coords.len() as f64;
    let mut rbar = 0.0;
    let mut cbar = 0.0;
    for &(r, c) in &coords {
        rbar += r as f64;
        cbar += c as f64;
    }
    rbar /= n;
    cbar /= n;

    let mut crr = 0.0;
    let mut ccc = 0.0;
    let mut crc = 0.0;
    for &(r, c) in &coords {
        let dr = r as f64 - rbar;
        let dc = c as f64 - cbar;
        crr += dr * dr;
        ccc += dc * dc;
        crc += dr * dc;
    }
    crr = crr / n + 1.0 / 12.0;
    ccc = ccc / n + 1.0 / 12.0;
    crc /= n;

    let trace = crr + ccc;
    let gap = ((crr - ccc) * (crr - ccc) + 4.0 * crc * crc).sqrt();
    let l1 = (trace + gap) / 2.0;
    let l2 = (trace - gap) / 2.0;
    Ok(MomentEllipse {
        major: 4.0 * l1.sqrt(),
        minor: 4.0 * l2.max(0.0).sqrt(),
        centroid: (rbar, cbar),
    })
}

/// Boundary length by Moore-neighbor contour tracing: unit steps for the
/// four axis moves, sqrt(2) for diagonal moves.
pub fn traced_perimeter(mask: &BinaryMask) -> Result<f64> {
    // clockwise Moore neighborhood starting east
    const DIRS: [(i64, i64); 8] = [
        (0, 1),
        (1, 1),
        (1, 0),
        (1, -1),
        (0, -1),
        (-1, -1),
        (-1, 0),
        (-1, 1),
    ];
    let start = mask
        .first_foreground()
        .ok_or_else(|| FirError::InvalidMask("empty mask".to_string()))?;

    // The raster-first pixel has no foreground neighbor to its west, so
    // begin the clockwise scan just after west.
    let mut current = start;
    let mut dir_in = 4usize; // direction of the backtrack pixel (west)
    let mut perimeter = 0.0;
    let mut first_move: Option<(usize, usize, usize)> = None;
    let limit = 8 * mask.foreground_count() + 8;

    for _ in 0..limit {
        let mut found = None;
        for step in 1..=8 {
            let dir = (dir_in + step) % 8;
            let nr = current.0 as i64 + DIRS[dir].0;
            let nc = current.1 as i64 + DIRS[dir].1;
            if mask.contains(nr, nc) {
                found = Some((dir, (nr as usize, nc as usize)));
                break;
            }
        }
        let (dir, next) = match found {
            Some(x) => x,
            // isolated pixel: ruled out by the mask invariants, but a lone
            // pixel traces a zero-length boundary rather than looping
            None => return Ok(0.0),
        };
        let state = (current.0, current.1, dir);
        match first_move {
            None => first_move = Some(state),
            Some(initial) => {
                if state == initial {
                    break;
                }
            }
        }
        perimeter += if DIRS[dir].0 == 0 || DIRS[dir].1 == 0 {
            1.0
        } else {
            std::f64::consts::SQRT_2
        };
        // new backtrack: the position we came from, seen from `next`
        dir_in = (dir + 4) % 8;
        current = next;
    }
    Ok(perimeter)
}

/// The five shape features. `spacing` converts pixel units to physical
/// units for area and perimeter; circularity and elongation are
/// scale-free, form rescales with them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeFeatures {
    pub area: f64,
    pub perimeter: f64,
    pub circularity: f64,
    pub elongation: f64,
    pub form: f64,
}

pub fn shape_features(mask: &BinaryMask, spacing: Option<f64>) -> Result<ShapeFeatures> {
    if mask.foreground_count() < super::MIN_MASK_PIXELS {
        return Err(FirError::InvalidMask(format!(
            "only {} foreground pixels, need {}",
            mask.foreground_count(),
            super::MIN_MASK_PIXELS
        )));
    }
    if !mask.is_single_component() {
        return Err(FirError::InvalidMask(
            "foreground is not a single 8-connected component".to_string(),
        ));
    }
    let sp = spacing.unwrap_or(1.0);
    let area = mask.foreground_count() as f64 * sp * sp;
    let perimeter = traced_perimeter(mask)? * sp;
    let ellipse = fit_moment_ellipse(mask)?;
    let elongation = ellipse.minor / ellipse.major;
    let circularity = if perimeter > 0.0 {
        4.0 * std::f64::consts::PI * area / (perimeter * perimeter)
    } else {
        0.0
    };
    let form = if area > 0.0 {
        perimeter * elongation / (8.0 * area)
    } else {
        0.0
    };
    Ok(ShapeFeatures {
        area,
        perimeter,
        circularity,
        elongation,
        form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::BinaryMask;

    fn rect_mask(h: usize, w: usize) -> BinaryMask {
        BinaryMask::from_fn(h + 4, w + 4, |r, c| {
            r >= 2 && r < h + 2 && c >= 2 && c < w + 2
        })
        .unwrap()
    }

    fn disk_mask(radius: f64) -> BinaryMask {
        let size = (2.0 * radius) as usize + 5;
        let ctr = size as f64 / 2.0;
        BinaryMask::from_fn(size, size, |r, c| {
            let dr = r as f64 - ctr;
            let dc = c as f64 - ctr;
            dr * dr + dc * dc <= radius * radius
        })
        .unwrap()
    }

    #[test]
    fn rectangle_axis_ratio_matches_uniform_covariance() {
        let e = fit_moment_ellipse(&rect_mask(10, 40)).unwrap();
        let ratio = e.major / e.minor;
        assert!((ratio - 4.0).abs() / 4.0 < 0.02, "ratio {ratio}");
    }

    #[test]
    fn disk_axes_are_equal() {
        let e = fit_moment_ellipse(&disk_mask(20.0)).unwrap();
        assert!((e.major / e.minor - 1.0).abs() < 0.02);
    }

    #[test]
    fn rotation_by_90_degrees_swaps_nothing() {
        let m = rect_mask(10, 40);
        let rot = BinaryMask::from_fn(m.width(), m.height(), |r, c| m.get(m.height() - 1 - c, r))
            .unwrap();
        let a = fit_moment_ellipse(&m).unwrap();
        let b = fit_moment_ellipse(&rot).unwrap();
        assert!((a.major - b.major).abs() < 1e-9);
        assert!((a.minor - b.minor).abs() < 1e-9);
    }

    #[test]
    fn square_perimeter_and_circularity() {
        let m = rect_mask(50, 50);
        let s = shape_features(&m, None).unwrap();
        assert_eq!(s.area, 2500.0);
        // traced boundary of a filled w x w square walks 4(w-1) unit steps
        assert!((s.perimeter - 196.0).abs() < 1e-9);
        let quarter_pi = std::f64::consts::PI / 4.0;
        assert!((s.circularity - quarter_pi).abs() < 0.05);
    }

    #[test]
    fn disk_is_nearly_circular() {
        let s = shape_features(&disk_mask(30.0), None).unwrap();
        assert!(
            s.circularity > 0.85 && s.circularity < 1.1,
            "{}",
            s.circularity
        );
        assert!((s.elongation - 1.0).abs() < 0.03);
    }

    #[test]
    fn translation_leaves_shape_features_unchanged() {
        let base = disk_mask(12.0);
        let shifted = BinaryMask::from_fn(base.height() + 7, base.width() + 3, |r, c| {
            r >= 7 && c >= 3 && base.get(r - 7, c - 3)
        })
        .unwrap();
        let a = shape_features(&base, None).unwrap();
        let b = shape_features(&shifted, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn perimeter_grows_linearly_with_side() {
        let p10 = shape_features(&rect_mask(10, 10), None).unwrap().perimeter;
        let p20 = shape_features(&rect_mask(20, 20), None).unwrap().perimeter;
        let p40 = shape_features(&rect_mask(40, 40), None).unwrap().perimeter;
        // equal increments in w give equal increments in perimeter
        let slope_small = (p20 - p10) / 10.0;
        let slope_large = (p40 - p20) / 20.0;
        assert!(
            (slope_large / slope_small - 1.0).abs() < 0.05,
            "{slope_small} vs {slope_large}"
        );
        assert!(p10 < p20 && p20 < p40);
    }

    #[test]
    fn undersized_or_split_masks_are_invalid() {
        let tiny = BinaryMask::from_fn(6, 6, |r, c| r < 2 && c < 2).unwrap();
        assert!(matches!(
            shape_features(&tiny, None),
            Err(FirError::InvalidMask(_))
        ));
        let split = BinaryMask::from_fn(12, 12, |r, _| r < 4 || r > 7).unwrap();
        assert!(matches!(
            shape_features(&split, None),
            Err(FirError::InvalidMask(_))
        ));
    }

    #[test]
    fn spacing_rescales_area_and_perimeter() {
        let m = rect_mask(10, 10);
        let px = shape_features(&m, None).unwrap();
        let mm = shape_features(&m, Some(0.084)).unwrap();
        assert!((mm.area - px.area * 0.084 * 0.084).abs() < 1e-9);
        assert!((mm.perimeter - px.perimeter * 0.084).abs() < 1e-9);
        assert!((mm.circularity - px.circularity).abs() < 1e-12);
        assert!((mm.elongation - px.elongation).abs() < 1e-12);
    }
}
