//! Receive-correlated channel model.
//!
//! The receiver correlation is the exponential Toeplitz profile
//! `Psi(i, j) = sqrt(K/N) * a^|i-j|`, and the interferers' powers form the
//! diagonal of `D~`. Downstream analytics only ever see the eigenvalues of
//! `Psi` together with those powers, bundled as a [`SpectrumPair`].

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, HermitianMatrix};

/// Static description of one uplink scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Receive antennas, `N`.
    pub n_rx: usize,
    /// Interfering users, `K`.
    pub k_users: usize,
    /// Noise level.
    pub rho: f64,
    /// Power of the user of interest.
    pub p0: f64,
    /// Correlation coefficient in `[0, 1)`.
    pub corr_a: f64,
    /// Interferer powers, length `K`.
    pub powers: Vec<f64>,
}

impl SystemConfig {
    /// Builds a config whose input SNR `p0 / rho` is given in dB.
    pub fn from_snr_db(
        n_rx: usize,
        k_users: usize,
        corr_a: f64,
        snr_db: f64,
        p0: f64,
        powers: Vec<f64>,
    ) -> Self {
        Self {
            n_rx,
            k_users,
            rho: p0 / db_to_linear(snr_db),
            p0,
            corr_a,
            powers,
        }
    }

    /// Same scenario at a different input SNR.
    pub fn with_snr_db(&self, snr_db: f64) -> Self {
        Self {
            rho: self.p0 / db_to_linear(snr_db),
            ..self.clone()
        }
    }

    /// Input SNR `p0 / rho` in dB.
    pub fn snr_db(&self) -> f64 {
        10.0 * (self.p0 / self.rho).log10()
    }

    /// `t = 1 / rho`.
    pub fn t(&self) -> f64 {
        1.0 / self.rho
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Diagonals of `D` (eigenvalues of `Psi`, length `N`) and `D~` (length `K`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumPair {
    d: Vec<f64>,
    d_tilde: Vec<f64>,
}

impl SpectrumPair {
    /// Checks the boundedness and positive-trace conditions before accepting
    /// the pair.
    pub fn new(d: Vec<f64>, d_tilde: Vec<f64>) -> Result<Self> {
        check_spectrum("d", &d, d_tilde.len())?;
        check_spectrum("d_tilde", &d_tilde, d_tilde.len())?;
        Ok(Self { d, d_tilde })
    }

    /// Skips validation. Only for degenerate test scenarios such as a
    /// zero-interference profile.
    #[doc(hidden)]
    pub fn new_unchecked(d: Vec<f64>, d_tilde: Vec<f64>) -> Self {
        Self { d, d_tilde }
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn d_tilde(&self) -> &[f64] {
        &self.d_tilde
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn k(&self) -> usize {
        self.d_tilde.len()
    }
}

fn check_spectrum(name: &str, values: &[f64], k: usize) -> Result<()> {
    if values.is_empty() || k == 0 {
        return Err(Error::Assumption {
            which: 2,
            reason: format!("{name} is empty"),
        });
    }
    if let Some(x) = values.iter().find(|x| !x.is_finite()) {
        return Err(Error::Assumption {
            which: 1,
            reason: format!("{name} contains a non-finite entry ({x})"),
        });
    }
    if let Some(x) = values.iter().find(|&&x| x < 0.0) {
        return Err(Error::Assumption {
            which: 1,
            reason: format!("{name} contains a negative entry ({x})"),
        });
    }
    let normalized_trace = values.iter().sum::<f64>() / k as f64;
    if !(normalized_trace > 0.0) {
        return Err(Error::Assumption {
            which: 2,
            reason: format!("normalized trace of {name} is {normalized_trace}, must be positive"),
        });
    }
    Ok(())
}

fn check_corr(a: f64) -> Result<()> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::validation(
            "corr_a",
            format!("{a} is outside [0, 1)"),
        ));
    }
    Ok(())
}

/// `Psi(i, j) = sqrt(k/n) * a^|i-j|`.
pub fn build_correlation_matrix(n: usize, k: usize, a: f64) -> Result<HermitianMatrix> {
    if n == 0 {
        return Err(Error::validation("n_rx", "must be at least 1"));
    }
    if k == 0 {
        return Err(Error::validation("k_users", "must be at least 1"));
    }
    check_corr(a)?;
    let scale = (k as f64 / n as f64).sqrt();
    HermitianMatrix::from_upper_fn(n, |i, j| {
        Complex64::new(scale * a.powi((j - i) as i32), 0.0)
    })
}

/// Eigenvalues of `Psi` paired with the configured powers.
pub fn correlation_spectrum(config: &SystemConfig) -> Result<SpectrumPair> {
    let psi = build_correlation_matrix(config.n_rx, config.k_users, config.corr_a)?;
    let d = hermitian_eigenvalues(&psi)?;
    Ok(SpectrumPair {
        d,
        d_tilde: config.powers.clone(),
    })
}

/// Interferer power presets in units of `base_power`.
///
/// `K = 2` and `K = 4` have fixed lists; `K = 8, 16, 32` split the users into
/// the classes `{P, 2P, 4P, 8P, 16P}` with frequencies `1/8, 1/4, 1/4, 1/8,
/// 1/4`. Lists are in ascending order.
pub fn power_profile(k: usize, base_power: f64) -> Result<Vec<f64>> {
    if !(base_power > 0.0 && base_power.is_finite()) {
        return Err(Error::validation(
            "p0",
            format!("base power {base_power} must be positive"),
        ));
    }
    let units: Vec<f64> = match k {
        2 => vec![4.0, 5.0],
        4 => vec![1.0, 1.0, 2.0, 4.0],
        8 | 16 | 32 => {
            let eighth = k / 8;
            let counts = [eighth, 2 * eighth, 2 * eighth, eighth, 2 * eighth];
            [1.0, 2.0, 4.0, 8.0, 16.0]
                .iter()
                .zip(counts)
                .flat_map(|(&p, c)| std::iter::repeat_n(p, c))
                .collect()
        }
        _ => {
            return Err(Error::validation(
                "powers",
                format!("no preset power profile for K = {k}; supply a power file"),
            ))
        }
    };
    Ok(units.into_iter().map(|u| u * base_power).collect())
}

/// Parses a power file: one positive decimal per non-blank line.
pub fn parse_power_file(text: &str) -> Result<Vec<f64>> {
    let mut powers = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| {
            Error::validation(
                "powers",
                format!("line {}: '{line}' is not a number", lineno + 1),
            )
        })?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::validation(
                "powers",
                format!(
                    "line {}: power {value} must be positive and finite",
                    lineno + 1
                ),
            ));
        }
        powers.push(value);
    }
    if powers.is_empty() {
        return Err(Error::validation("powers", "power file is empty"));
    }
    Ok(powers)
}

pub fn read_power_file(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::validation("powers", format!("cannot read {}: {e}", path.display())))?;
    parse_power_file(&text)
}

/// Checks a config and returns its spectrum.
pub fn validate_config(config: &SystemConfig) -> Result<SpectrumPair> {
    if config.n_rx == 0 {
        return Err(Error::validation("n_rx", "must be at least 1"));
    }
    if config.k_users == 0 {
        return Err(Error::validation("k_users", "must be at least 1"));
    }
    check_corr(config.corr_a)?;
    if !(config.rho > 0.0 && config.rho.is_finite()) {
        return Err(Error::validation(
            "rho",
            format!("{} must be positive and finite", config.rho),
        ));
    }
    if !(config.p0 > 0.0 && config.p0.is_finite()) {
        return Err(Error::validation(
            "p0",
            format!("{} must be positive and finite", config.p0),
        ));
    }
    if config.powers.len() != config.k_users {
        return Err(Error::validation(
            "powers",
            format!(
                "expected {} powers, got {}",
                config.k_users,
                config.powers.len()
            ),
        ));
    }
    if let Some(p) = config.powers.iter().find(|p| !p.is_finite()) {
        return Err(Error::Assumption {
            which: 1,
            reason: format!("interferer power {p} is not finite"),
        });
    }
    if let Some(p) = config.powers.iter().find(|&&p| p <= 0.0) {
        return Err(Error::Assumption {
            which: 2,
            reason: format!("interferer power {p} must be strictly positive"),
        });
    }
    let spectrum = correlation_spectrum(config)?;
    SpectrumPair::new(spectrum.d, spectrum.d_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize, k: usize, a: f64, powers: Vec<f64>) -> SystemConfig {
        SystemConfig::from_snr_db(n, k, a, 15.0, 1.0, powers)
    }

    #[test]
    fn uncorrelated_square_is_identity() {
        let m = build_correlation_matrix(4, 4, 0.0).unwrap();
        assert_eq!(m, HermitianMatrix::identity(4).unwrap());
    }

    #[test]
    fn uncorrelated_rectangular_is_scaled_identity() {
        let m = build_correlation_matrix(4, 2, 0.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.5f64.sqrt() } else { 0.0 };
                assert!((m.get(i, j).re - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn toeplitz_first_row() {
        let m = build_correlation_matrix(4, 4, 0.9).unwrap();
        let row: Vec<f64> = (0..4).map(|j| m.get(0, j).re).collect();
        for (got, want) in row.iter().zip([1.0, 0.9, 0.81, 0.729]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(m.get(3, 1).re, m.get(1, 3).re);
    }

    #[test]
    fn correlation_out_of_range() {
        for a in [1.0, -0.1, 1.5, f64::NAN] {
            let err = build_correlation_matrix(4, 4, a).unwrap_err();
            assert!(
                matches!(
                    err,
                    Error::Validation {
                        field: "corr_a",
                        ..
                    }
                ),
                "{a}"
            );
        }
    }

    #[test]
    fn spectra() {
        let s = correlation_spectrum(&config(4, 4, 0.0, vec![1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(s.d(), &[1.0; 4]);
        assert_eq!(s.d_tilde(), &[1.0, 2.0, 3.0, 4.0]);

        // 2x2 Toeplitz [[1, a], [a, 1]] has eigenvalues 1 -/+ a
        let s = correlation_spectrum(&config(2, 2, 0.5, vec![1.0, 1.0])).unwrap();
        assert!((s.d()[0] - 0.5).abs() < 1e-15 && (s.d()[1] - 1.5).abs() < 1e-15);

        let s = correlation_spectrum(&config(4, 2, 0.0, vec![4.0, 5.0])).unwrap();
        for d in s.d() {
            assert!((d - 0.5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn spectrum_trace_and_positivity() {
        for (n, k) in [(4, 4), (8, 8), (16, 8), (4, 2), (32, 32), (64, 16)] {
            for a in [0.0, 0.3, 0.6, 0.9, 0.99] {
                let powers = vec![1.0; k];
                let s = correlation_spectrum(&config(n, k, a, powers)).unwrap();
                let sum: f64 = s.d().iter().sum();
                let want = n as f64 * (k as f64 / n as f64).sqrt();
                assert!((sum - want).abs() < 1e-9 * n as f64, "n={n} k={k} a={a}");
                assert!(s.d().iter().all(|&d| d > 0.0), "n={n} k={k} a={a}");
            }
        }
    }

    #[test]
    fn presets() {
        assert_eq!(power_profile(2, 1.0).unwrap(), vec![4.0, 5.0]);
        assert_eq!(power_profile(4, 2.0).unwrap(), vec![2.0, 2.0, 4.0, 8.0]);
        assert_eq!(
            power_profile(8, 1.0).unwrap(),
            vec![1.0, 2.0, 2.0, 4.0, 4.0, 8.0, 16.0, 16.0]
        );
        for k in [8, 16, 32] {
            let p = power_profile(k, 1.5).unwrap();
            assert_eq!(p.len(), k);
            // class-weighted total per user: 1/8 + 2/4 + 4/4 + 8/8 + 16/4 = 6.625
            let total: f64 = p.iter().sum();
            assert!((total - 1.5 * 6.625 * k as f64).abs() < 1e-12);
            assert!(p.windows(2).all(|w| w[0] <= w[1]));
        }
        for k in [1, 3, 5, 64] {
            assert!(power_profile(k, 1.0).is_err());
        }
    }

    #[test]
    fn power_file_parsing() {
        assert_eq!(
            parse_power_file("1\n2.5\n\n 4e-1 \n").unwrap(),
            vec![1.0, 2.5, 0.4]
        );
        assert!(parse_power_file("").is_err());
        assert!(parse_power_file("1\nabc\n").is_err());
        assert!(parse_power_file("1\n0\n").is_err());
        assert!(parse_power_file("-2\n").is_err());
    }

    #[test]
    fn validation() {
        let ok = config(4, 4, 0.0, vec![1.0; 4]);
        let s = validate_config(&ok).unwrap();
        assert_eq!(s.n(), 4);
        assert_eq!(s.k(), 4);

        let zero_power = config(4, 4, 0.0, vec![1.0, 0.0, 1.0, 1.0]);
        assert!(matches!(
            validate_config(&zero_power),
            Err(Error::Assumption { which: 2, .. })
        ));

        let inf_power = config(4, 4, 0.0, vec![1.0, f64::INFINITY, 1.0, 1.0]);
        assert!(matches!(
            validate_config(&inf_power),
            Err(Error::Assumption { which: 1, .. })
        ));

        let full_corr = config(4, 4, 1.0, vec![1.0; 4]);
        assert!(matches!(
            validate_config(&full_corr),
            Err(Error::Validation {
                field: "corr_a",
                ..
            })
        ));

        let wrong_len = config(4, 4, 0.0, vec![1.0; 3]);
        assert!(validate_config(&wrong_len).is_err());

        let mut bad_rho = ok.clone();
        bad_rho.rho = f64::NAN;
        assert!(matches!(
            validate_config(&bad_rho),
            Err(Error::Validation { field: "rho", .. })
        ));

        let mut bad_p0 = ok.clone();
        bad_p0.p0 = 0.0;
        assert!(matches!(
            validate_config(&bad_p0),
            Err(Error::Validation { field: "p0", .. })
        ));

        assert!(SpectrumPair::new(vec![], vec![1.0]).is_err());
        assert!(SpectrumPair::new(vec![1.0], vec![0.0]).is_err());
        assert!(SpectrumPair::new(vec![f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn snr_db_roundtrip() {
        let c = SystemConfig::from_snr_db(4, 4, 0.0, 15.0, 2.0, vec![1.0; 4]);
        assert!((c.snr_db() - 15.0).abs() < 1e-12);
        assert!((c.p0 / c.rho - 10f64.powf(1.5)).abs() < 1e-9);
        assert!((c.with_snr_db(3.0).snr_db() - 3.0).abs() < 1e-12);
    }
}
