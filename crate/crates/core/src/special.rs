//! Standard normal distribution helpers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `Phi(x)`, the standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `phi(x)`, the standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Gaussian tail `Q(x) = 1 - Phi(x)`, evaluated without cancellation.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    // 40-digit references
    const CDF: &[(f64, f64)] = &[
        (1.6449, 0.950_004_782_531_653_697_29),
        (-3.0, 0.001_349_898_031_630_094_526_7),
        (5.0, 0.999_999_713_348_428_120_81),
        (-0.5, 0.308_537_538_725_986_896_36),
        (2.0, 0.977_249_868_051_820_792_8),
    ];

    #[test]
    fn cdf_matches_reference() {
        for &(x, want) in CDF {
            assert!((normal_cdf(x) - want).abs() < 1e-12, "x = {x}");
            assert!((q_function(x) - (1.0 - want)).abs() < 1e-12, "x = {x}");
        }
        // deep tail keeps relative accuracy
        let q = q_function(8.5);
        assert!((q / 9.479_534_822_203_318_354_2e-18 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetry() {
        assert_eq!(q_function(0.0), 0.5);
        for i in -60..=60 {
            let x = i as f64 * 0.173;
            assert!((q_function(-x) + q_function(x) - 1.0).abs() < 1e-15);
            assert!((q_function(x) - (1.0 - normal_cdf(x))).abs() < 1e-15);
        }
    }

    #[test]
    fn pdf_range() {
        assert!((normal_pdf(0.0) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-16);
        for i in -100..=100 {
            let p = normal_pdf(i as f64 * 0.1);
            assert!((0.0..=1.0 / (2.0 * PI).sqrt()).contains(&p));
        }
    }

    #[test]
    fn q_strictly_decreasing() {
        let grid: Vec<f64> = (-80..=80).map(|i| q_function(i as f64 * 0.1)).collect();
        assert!(grid.windows(2).all(|w| w[1] < w[0]));
    }
}
