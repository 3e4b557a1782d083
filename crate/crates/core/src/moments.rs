//! Deterministic equivalents for the first three moments of the LMMSE
//! output SNR.
//!
//! For `t > 0` the pair `(delta, delta~)` is the unique positive solution of
//!
//! ```text
//! delta  = (1/K) sum_i d_i  / (1 + t delta~ d_i)
//! delta~ = (1/K) sum_j d~_j / (1 + t delta  d~_j)
//! ```
//!
//! From it we form the diagonal matrices `T`, `T~`, the traces `gamma`,
//! `gamma~`, and with `t = 1/rho` the second and third order constants
//! `Omega^2` and `nu`. The SNR `beta` then has mean `p0 delta / rho`,
//! variance `p0^2 Omega^2 / K` and third central moment `p0^3 nu / K^2`.

use serde::Serialize;

use crate::channel::{validate_config, SpectrumPair, SystemConfig};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointSolution {
    pub delta: f64,
    pub delta_tilde: f64,
    pub t: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuxiliaryQuantities {
    /// Diagonal of `T = (I + t delta~ D)^-1`.
    pub t_diag: Vec<f64>,
    /// Diagonal of `T~ = (I + t delta D~)^-1`.
    pub t_tilde_diag: Vec<f64>,
    /// `(1/K) Tr D^2 T^2`.
    pub gamma: f64,
    /// `(1/K) Tr D~^2 T~^2`.
    pub gamma_tilde: f64,
}

/// Everything the asymptotic analysis produces for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticMoments {
    pub delta: f64,
    pub delta_tilde: f64,
    pub gamma: f64,
    pub gamma_tilde: f64,
    /// `delta / rho`, the first moment of `beta / p0`.
    pub mean_norm: f64,
    pub omega_sq: f64,
    pub nu: f64,
    /// Mean of `beta`.
    pub mean: f64,
    /// Variance of `beta`.
    pub variance: f64,
    /// Third central moment of `beta`.
    pub third_central: f64,
}

fn delta_map(d: &[f64], k: f64, t: f64, other: f64) -> f64 {
    d.iter().map(|&x| x / (1.0 + t * other * x)).sum::<f64>() / k
}

fn residuals(spec: &SpectrumPair, t: f64, delta: f64, delta_tilde: f64) -> f64 {
    let k = spec.k() as f64;
    let r1 = (delta - delta_map(spec.d(), k, t, delta_tilde)).abs();
    let r2 = (delta_tilde - delta_map(spec.d_tilde(), k, t, delta)).abs();
    r1.max(r2)
}

/// Solves the fixed point starting from the normalized traces of `D`, `D~`.
pub fn solve_fixed_point(spec: &SpectrumPair, t: f64, tol: f64) -> Result<FixedPointSolution> {
    let k = spec.k() as f64;
    let init = (
        spec.d().iter().sum::<f64>() / k,
        spec.d_tilde().iter().sum::<f64>() / k,
    );
    solve_fixed_point_from(spec, t, tol, init)
}

/// Solves from an explicit positive start.
///
/// Substituting the second equation into the first leaves the scalar
/// equation `h(delta) = delta - f(f~(delta)) = 0`, where `f(f~(.))` is
/// increasing and bounded by `Tr D / K`. `h` has exactly one root in
/// `(0, Tr D / K]` and `h'(delta) = 1 - t^2 gamma gamma~`, so Newton steps are
/// cheap; any step leaving the current bracket falls back to bisection.
pub fn solve_fixed_point_from(
    spec: &SpectrumPair,
    t: f64,
    tol: f64,
    init: (f64, f64),
) -> Result<FixedPointSolution> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::validation(
            "t",
            format!("{t} must be positive and finite"),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::validation("tol", format!("{tol} must be positive")));
    }
    if !(init.0 > 0.0 && init.1 > 0.0) {
        return Err(Error::validation("init", "initial point must be positive"));
    }
    let k = spec.k() as f64;
    let upper = spec.d().iter().sum::<f64>() / k;

    // h(delta) and h'(delta), with delta~ = f~(delta)
    let eval = |delta: f64| {
        let mut delta_tilde = 0.0;
        let mut d_delta_tilde = 0.0;
        for &x in spec.d_tilde() {
            let r = 1.0 / (1.0 + t * delta * x);
            delta_tilde += x * r;
            d_delta_tilde -= t * (x * r).powi(2);
        }
        delta_tilde /= k;
        d_delta_tilde /= k;
        let mut image = 0.0;
        let mut d_image = 0.0;
        for &x in spec.d() {
            let r = 1.0 / (1.0 + t * delta_tilde * x);
            image += x * r;
            d_image -= t * (x * r).powi(2);
        }
        image /= k;
        d_image /= k;
        (delta - image, 1.0 - d_image * d_delta_tilde, delta_tilde)
    };

    let (mut lo, mut hi) = (0.0, upper);
    let mut delta = init.0.min(upper);
    let mut last_residual = f64::INFINITY;
    let mut polished = false;
    for iteration in 1..=MAX_ITERATIONS {
        let (h, dh, delta_tilde) = eval(delta);
        last_residual = residuals(spec, t, delta, delta_tilde);
        if last_residual <= tol && polished {
            return Ok(FixedPointSolution {
                delta,
                delta_tilde,
                t,
                residual: last_residual,
                iterations: iteration,
            });
        }
        // one extra Newton step once inside tolerance
        polished = last_residual <= tol;
        if h < 0.0 {
            lo = delta;
        } else {
            hi = delta;
        }
        let newton = delta - h / dh;
        delta = if dh > 0.0 && newton > lo && newton <= hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::FixedPointNoConvergence {
        iterations: MAX_ITERATIONS,
        residual: last_residual,
    })
}

/// Builds `T`, `T~`, `gamma`, `gamma~` and checks `t^2 gamma gamma~ < 1`.
pub fn auxiliary_quantities(
    spec: &SpectrumPair,
    fp: &FixedPointSolution,
) -> Result<AuxiliaryQuantities> {
    let k = spec.k() as f64;
    let t = fp.t;
    let t_diag: Vec<f64> = spec
        .d()
        .iter()
        .map(|&d| 1.0 / (1.0 + t * fp.delta_tilde * d))
        .collect();
    let t_tilde_diag: Vec<f64> = spec
        .d_tilde()
        .iter()
        .map(|&d| 1.0 / (1.0 + t * fp.delta * d))
        .collect();
    let gamma = spec
        .d()
        .iter()
        .zip(&t_diag)
        .map(|(d, tt)| (d * tt).powi(2))
        .sum::<f64>()
        / k;
    let gamma_tilde = spec
        .d_tilde()
        .iter()
        .zip(&t_tilde_diag)
        .map(|(d, tt)| (d * tt).powi(2))
        .sum::<f64>()
        / k;

    let stability = t * t * gamma * gamma_tilde;
    if !(stability < 1.0) {
        return Err(Error::Unstable { value: stability });
    }
    Ok(AuxiliaryQuantities {
        t_diag,
        t_tilde_diag,
        gamma,
        gamma_tilde,
    })
}

/// Asymptotic moments for an already validated spectrum.
pub fn moments_from_spectrum(
    spec: &SpectrumPair,
    rho: f64,
    p0: f64,
    tol: f64,
) -> Result<AsymptoticMoments> {
    let t = 1.0 / rho;
    let fp = solve_fixed_point(spec, t, tol)?;
    let aux = auxiliary_quantities(spec, &fp)?;
    let k = spec.k() as f64;
    let (gamma, gamma_tilde) = (aux.gamma, aux.gamma_tilde);

    let rho2 = rho * rho;
    let gap = rho2 - gamma * gamma_tilde;
    let omega_sq = gamma / rho2 * (gamma * gamma_tilde / gap + 1.0);

    let tr_dt3: f64 = spec
        .d()
        .iter()
        .zip(&aux.t_diag)
        .map(|(d, tt)| (d * tt).powi(3))
        .sum();
    let tr_dt3_tilde: f64 = spec
        .d_tilde()
        .iter()
        .zip(&aux.t_tilde_diag)
        .map(|(d, tt)| (d * tt).powi(3))
        .sum();
    let nu =
        2.0 * rho.powi(3) / (k * gap.powi(3)) * (tr_dt3 - (gamma / rho).powi(3) * tr_dt3_tilde);
    if !(nu > 0.0) {
        return Err(Error::NonPositiveThirdMoment { nu });
    }

    let mean_norm = fp.delta / rho;
    Ok(AsymptoticMoments {
        delta: fp.delta,
        delta_tilde: fp.delta_tilde,
        gamma,
        gamma_tilde,
        mean_norm,
        omega_sq,
        nu,
        mean: p0 * mean_norm,
        variance: p0 * p0 * omega_sq / k,
        third_central: p0.powi(3) * nu / (k * k),
    })
}

/// Validates `config` and evaluates its asymptotic moments.
pub fn asymptotic_moments(config: &SystemConfig) -> Result<AsymptoticMoments> {
    let spec = validate_config(config)?;
    moments_from_spectrum(&spec, config.rho, config.p0, DEFAULT_TOL)
}
