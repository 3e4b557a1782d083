//! Generalized Gamma law `G(alpha, b, xi)`.
//!
//! Mean `alpha b`, variance `alpha b^2`, third central moment
//! `(xi + 1) alpha b^3`. Only the moment generating function has a closed
//! form:
//!
//! ```text
//! log MGF(s) = alpha / (xi - 1) * (1 - (1 - b xi s)^((xi - 1) / xi))
//! ```
//!
//! which tends to the Gamma law `-alpha log(1 - b s)` as `xi -> 1`. The two
//! sign cases `xi > 1` and `xi < 1` are the same expression.

use serde::Serialize;

use crate::error::{Error, Result};

/// Below this distance from 1 the Gamma limit is used for `xi`.
pub const GAMMA_BRANCH_TOL: f64 = 1e-9;
/// `xi` closer than this to 0 is refused.
pub const XI_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenGammaParams {
    pub alpha: f64,
    pub b: f64,
    pub xi: f64,
}

/// `(K(t), K'(t), K''(t))` for the cumulant generating function `K = log MGF`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cumulants {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
}

impl GenGammaParams {
    pub fn new(alpha: f64, b: f64, xi: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Fit {
                reason: format!("shape alpha = {alpha} must be positive"),
            });
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Fit {
                reason: format!("scale b = {b} must be positive"),
            });
        }
        if !(xi > -1.0 && xi.is_finite()) {
            return Err(Error::Fit {
                reason: format!("xi = {xi} must exceed -1"),
            });
        }
        if xi.abs() < XI_ZERO_TOL {
            return Err(Error::Fit {
                reason: format!("xi = {xi} is too close to 0"),
            });
        }
        Ok(Self { alpha, b, xi })
    }

    pub fn mean(&self) -> f64 {
        self.alpha * self.b
    }

    pub fn variance(&self) -> f64 {
        self.alpha * self.b * self.b
    }

    pub fn third_central(&self) -> f64 {
        (self.xi + 1.0) * self.alpha * self.b.powi(3)
    }

    fn is_gamma(&self) -> bool {
        (self.xi - 1.0).abs() < GAMMA_BRANCH_TOL
    }

    /// `log(1 - b xi s)`, or a domain error when `1 - b xi s <= 0`.
    fn log_base(&self, s: f64) -> Result<f64> {
        let xi = if self.is_gamma() { 1.0 } else { self.xi };
        let x = -self.b * xi * s;
        if !(x > -1.0) {
            return Err(Error::MgfDomain {
                arg: s,
                boundary: 1.0 / (self.b * xi),
            });
        }
        Ok(x.ln_1p())
    }

    /// `log MGF(s)`.
    pub fn log_mgf(&self, s: f64) -> Result<f64> {
        let u = self.log_base(s)?;
        if self.is_gamma() {
            return Ok(-self.alpha * u);
        }
        let xi = self.xi;
        Ok(-self.alpha / (xi - 1.0) * ((xi - 1.0) / xi * u).exp_m1())
    }

    pub fn mgf(&self, s: f64) -> Result<f64> {
        self.log_mgf(s).map(f64::exp)
    }

    pub fn cumulants(&self, t: f64) -> Result<Cumulants> {
        let u = self.log_base(t)?;
        let xi = if self.is_gamma() { 1.0 } else { self.xi };
        let k0 = self.log_mgf(t)?;
        let k1 = self.mean() * (-u / xi).exp();
        let k2 = self.variance() * (-u * (1.0 / xi + 1.0)).exp();
        Ok(Cumulants { k0, k1, k2 })
    }

    /// Solves `K'(t) = y` in closed form.
    pub fn saddle_root(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::Domain(format!("saddle point needs y > 0, got {y}")));
        }
        let ratio_log = (y / self.mean()).ln();
        if self.is_gamma() {
            // (1 - alpha b / y) / b
            return Ok(-(-ratio_log).exp_m1() / self.b);
        }
        Ok(-(-self.xi * ratio_log).exp_m1() / (self.b * self.xi))
    }
}

/// Matches mean, variance and third central moment.
pub fn fit_from_moments(mean: f64, variance: f64, third_central: f64) -> Result<GenGammaParams> {
    for (name, value) in [
        ("mean", mean),
        ("variance", variance),
        ("third central moment", third_central),
    ] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Fit {
                reason: format!("{name} = {value} must be positive and finite"),
            });
        }
    }
    let alpha = mean * mean / variance;
    let b = variance / mean;
    let xi = third_central * mean / (variance * variance) - 1.0;
    GenGammaParams::new(alpha, b, xi)
}
