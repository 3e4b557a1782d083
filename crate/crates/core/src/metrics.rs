//! Analytic BER and outage probability from the fitted generalized Gamma law.
//!
//! The QPSK/Gray BER uses the MGF form of the Gaussian tail,
//!
//! ```text
//! BER = (1/pi) int_0^{pi/2} MGF(-1 / (2 sin^2 phi)) dphi
//! ```
//!
//! integrated with Gauss-Legendre nodes (the rule never touches the endpoint
//! `phi = 0`). Outage uses the saddle-point CDF
//! `Phi(w0) + phi(w0) (1/w0 - 1/u0)` built from the cumulant function at the
//! root of `K'(t) = y`.
//!
//! Other constellations plug into the same MGF integral with their own
//! angular kernels; only QPSK is provided.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::channel::SystemConfig;
use crate::error::{Error, Result};
use crate::gengamma::{fit_from_moments, GenGammaParams};
use crate::moments::{asymptotic_moments, AsymptoticMoments};
use crate::montecarlo::{empirical_ber, run_trials, SnrSampleSet};
use crate::special::{normal_cdf, normal_pdf};

pub const DEFAULT_NODES: usize = 64;
pub const MIN_NODES: usize = 8;

/// Below this `|w0|` the saddle-point formula is evaluated on either side of
/// the threshold and interpolated.
pub const DEGENERATE_W0: f64 = 1e-4;
const DEGENERATE_SHIFT: f64 = 1e-3;

/// Gauss-Legendre rule on `(0, pi/2)`.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureSpec {
    pub fn new(order: usize) -> Result<Self> {
        if order < MIN_NODES {
            return Err(Error::validation(
                "nodes",
                format!("quadrature order {order} is below the minimum {MIN_NODES}"),
            ));
        }
        let (x, w) = gauss_legendre(order);
        // map [-1, 1] onto (0, pi/2)
        let half = FRAC_PI_2 / 2.0;
        Ok(Self {
            nodes: x.iter().map(|xi| half * (xi + 1.0)).collect(),
            weights: w.iter().map(|wi| half * wi).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(*x)?;
        }
        Ok(acc)
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(DEFAULT_NODES).expect("default order is valid")
    }
}

/// Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(z) and P_{n-1}(z)
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j as f64 + 1.0) * z * p2 - j as f64 * p3) / (j as f64 + 1.0);
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let step = p1 / dp;
            z -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Average QPSK/Gray BER under the fitted SNR law.
pub fn ber_qpsk(p: &GenGammaParams, q: &QuadratureSpec) -> Result<f64> {
    let integral = q.integrate(|phi| {
        let s = phi.sin();
        p.mgf(-1.0 / (2.0 * s * s))
    })?;
    Ok(integral / PI)
}

/// Saddle-point outage with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutageEstimate {
    /// Clamped to `[0, 1]`.
    pub probability: f64,
    /// Value of the formula before clamping.
    pub raw: f64,
    pub w0: f64,
    pub u0: f64,
    pub interpolated: bool,
}

fn saddle_terms(p: &GenGammaParams, y: f64) -> Result<(f64, f64)> {
    let t = p.saddle_root(y)?;
    let c = p.cumulants(t)?;
    let w0 = t.signum() * (2.0 * (t * y - c.k0)).max(0.0).sqrt();
    let u0 = t * c.k2.sqrt();
    Ok((w0, u0))
}

fn lugannani_rice(w0: f64, u0: f64) -> f64 {
    normal_cdf(w0) + normal_pdf(w0) * (1.0 / w0 - 1.0 / u0)
}

pub fn outage_estimate(p: &GenGammaParams, y: f64) -> Result<OutageEstimate> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Domain(format!(
            "outage threshold must be positive, got {y}"
        )));
    }
    let (w0, u0) = saddle_terms(p, y)?;
    let (raw, interpolated) = if w0.abs() < DEGENERATE_W0 {
        // removable singularity at the mean: average the two neighbours
        let (wl, ul) = saddle_terms(p, y * (1.0 - DEGENERATE_SHIFT))?;
        let (wh, uh) = saddle_terms(p, y * (1.0 + DEGENERATE_SHIFT))?;
        (
            0.5 * (lugannani_rice(wl, ul) + lugannani_rice(wh, uh)),
            true,
        )
    } else {
        (lugannani_rice(w0, u0), false)
    };
    Ok(OutageEstimate {
        probability: raw.clamp(0.0, 1.0),
        raw,
        w0,
        u0,
        interpolated,
    })
}

/// `P(beta < y)` by the saddle-point approximation.
pub fn outage_probability(p: &GenGammaParams, y: f64) -> Result<f64> {
    outage_estimate(p, y).map(|e| e.probability)
}

/// Asymptotic moments of `config` and the generalized Gamma law they imply.
pub fn fitted_law(config: &SystemConfig) -> Result<(AsymptoticMoments, GenGammaParams)> {
    let m = asymptotic_moments(config)?;
    let p = fit_from_moments(m.mean, m.variance, m.third_central)?;
    Ok((m, p))
}

/// Monte Carlo settings for the optional empirical column of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmpiricalSpec {
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerRow {
    pub snr_db: f64,
    pub ber_theory: f64,
    pub ber_empirical: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

/// BER versus input SNR. Every grid point reuses the same seed, so the
/// empirical column is computed on common random numbers.
pub fn ber_curve(
    base: &SystemConfig,
    snr_grid_db: &[f64],
    q: &QuadratureSpec,
    empirical: Option<EmpiricalSpec>,
) -> Result<Vec<BerRow>> {
    let mut grid = snr_grid_db.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.into_iter()
        .map(|snr_db| {
            let config = base.with_snr_db(snr_db);
            let (_, law) = fitted_law(&config)?;
            let ber_theory = ber_qpsk(&law, q)?;
            let ber_empirical = match empirical {
                Some(e) => Some(empirical_ber(&run_trials(&config, e.trials, e.seed)?)),
                None => None,
            };
            Ok(BerRow {
                snr_db,
                ber_theory,
                ber_empirical,
                trials: empirical.map(|e| e.trials),
                seed: empirical.map(|e| e.seed),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageRow {
    pub threshold: f64,
    pub pout_saddle: f64,
    pub pout_raw: f64,
    pub pout_empirical: Option<f64>,
}

/// Outage versus threshold for one fitted law, optionally next to the
/// empirical CDF of `samples`.
pub fn outage_curve(
    law: &GenGammaParams,
    thresholds: &[f64],
    samples: Option<&SnrSampleSet>,
) -> Result<Vec<OutageRow>> {
    let mut grid = thresholds.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.into_iter()
        .map(|y| {
            let est = outage_estimate(law, y)?;
            Ok(OutageRow {
                threshold: y,
                pout_saddle: est.probability,
                pout_raw: est.raw,
                pout_empirical: samples.map(|s| crate::montecarlo::empirical_outage(s, y)),
            })
        })
        .collect()
}
