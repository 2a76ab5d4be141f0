//! First-order statistics of the masked pixel intensities.

use crate::error::FirError;
use crate::Result;

/// The seven intensity features, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityFeatures {
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub maximum: f64,
    pub minimum: f64,
    pub kurtosis: f64,
    pub skewness: f64,
}

/// Computes mean, median, sample standard deviation (n-1 denominator),
/// extrema, and moment-based kurtosis m4/m2^2 and skewness m3/m2^1.5.
/// All-identical inputs have no defined kurtosis or skewness and are
/// rejected.
pub fn intensity_features(pixels: &[f64]) -> Result<IntensityFeatures> {
    if pixels.len() < 2 {
        return Err(FirError::InsufficientSamples {
            needed: 2,
            got: pixels.len(),
        });
    }
    let n = pixels.len() as f64;
    let mean = pixels.iter().sum::<f64>() / n;

    let mut sorted = pixels.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    let minimum = sorted[0];
    let maximum = sorted[sorted.len() - 1];

    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &x in pixels {
        let b = x - mean;
        let b2 = b * b;
        m2 += b2;
        m3 += b2 * b;
        m4 += b2 * b2;
    }
    let ss = m2;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if m2 == 0.0 {
        return Err(FirError::DegenerateDistribution);
    }
    Ok(IntensityFeatures {
        mean,
        median,
        std_dev: (ss / (n - 1.0)).sqrt(),
        maximum,
        minimum,
        kurtosis: m4 / (m2 * m2),
        skewness: m3 / m2.powf(1.5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_three_values() {
        let f = intensity_features(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(f.mean, 2.0);
        assert_eq!(f.median, 2.0);
        assert!((f.std_dev - 1.0).abs() < 1e-12);
        assert_eq!(f.maximum, 3.0);
        assert_eq!(f.minimum, 1.0);
        assert!(f.skewness.abs() < 1e-12);
    }

    #[test]
    fn hand_computed_moments() {
        // [0,0,0,4]: m2 = 3, m3 = 6, m4 = 21
        let f = intensity_features(&[0.0, 0.0, 0.0, 4.0]).unwrap();
        assert!((f.mean - 1.0).abs() < 1e-12);
        assert!((f.skewness - 6.0 / 3.0_f64.powf(1.5)).abs() < 1e-12);
        assert!((f.kurtosis - 21.0 / 9.0).abs() < 1e-12);
        assert!((f.median - 0.0).abs() < 1e-12);
        assert!((f.std_dev - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_input_is_degenerate() {
        assert!(matches!(
            intensity_features(&[5.0, 5.0, 5.0]),
            Err(FirError::DegenerateDistribution)
        ));
    }

    #[test]
    fn even_count_median_averages_center() {
        let f = intensity_features(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(f.median, 2.5);
    }
}
