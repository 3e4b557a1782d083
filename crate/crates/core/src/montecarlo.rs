//! Monte Carlo sampler for the exact finite-dimensional output SNR.
//!
//! Works in the eigenbasis of `Psi`: with `t = 1/rho`,
//!
//! ```text
//! beta = (p0 t / K) v^* M^{-1} v,   v = D^{1/2} z,
//! M    = (t / K) D^{1/2} Z D~ Z^* D^{1/2} + I
//! ```
//!
//! where `Z` (N x K) and `z` (N) hold i.i.d. standard complex Gaussians.
//! Trial `i` of a run draws from stream `i` of the run seed, `Z` first
//! (row-major) then `z`, so a run is bit-identical regardless of how trials
//! are scheduled across threads.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{validate_config, SpectrumPair, SystemConfig};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, HermitianMatrix};
use crate::rng::RngStream;
use crate::special::q_function;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrSampleSet {
    pub samples: Vec<f64>,
    pub config: SystemConfig,
    pub seed: u64,
    pub trials: usize,
}

/// Central moments with the `1/n` convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalMoments {
    pub mean: f64,
    pub variance: f64,
    pub third_central: f64,
}

/// Draws one realization of `beta`.
pub fn sample_snr(spec: &SpectrumPair, config: &SystemConfig, rng: &mut RngStream) -> Result<f64> {
    let n = spec.n();
    let k = spec.k();
    let t = config.t();

    let sqrt_d: Vec<f64> = spec.d().iter().map(|d| d.sqrt()).collect();
    let sqrt_dt: Vec<f64> = spec.d_tilde().iter().map(|d| d.sqrt()).collect();

    // A = D^{1/2} Z D~^{1/2}, so that M = (t/K) A A^* + I
    let mut a = vec![Complex64::new(0.0, 0.0); n * k];
    rng.fill_complex_gaussian(&mut a);
    for i in 0..n {
        for j in 0..k {
            a[i * k + j] *= sqrt_d[i] * sqrt_dt[j];
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    rng.fill_complex_gaussian(&mut v);
    for (vi, sd) in v.iter_mut().zip(&sqrt_d) {
        *vi *= sd;
    }

    let scale = t / k as f64;
    let m = HermitianMatrix::from_upper_fn(n, |i, j| {
        let row_i = &a[i * k..(i + 1) * k];
        let row_j = &a[j * k..(j + 1) * k];
        let s: Complex64 = row_i.iter().zip(row_j).map(|(x, y)| x * y.conj()).sum();
        let mut e = s * scale;
        if i == j {
            e += 1.0;
        }
        e
    })?;
    let factor = cholesky(&m)?;
    let mut x = v.clone();
    factor.solve_in_place(&mut x);
    let quad: f64 = v.iter().zip(&x).map(|(vi, xi)| (vi.conj() * xi).re).sum();
    Ok(config.p0 * scale * quad)
}

/// Runs `trials` independent draws in parallel.
pub fn run_trials(config: &SystemConfig, trials: usize, seed: u64) -> Result<SnrSampleSet> {
    run_trials_with(config, trials, seed, Execution::Parallel)
}

pub fn run_trials_with(
    config: &SystemConfig,
    trials: usize,
    seed: u64,
    execution: Execution,
) -> Result<SnrSampleSet> {
    if trials == 0 {
        return Err(Error::validation("trials", "must be at least 1"));
    }
    let spec = validate_config(config)?;
    let draw = |i: usize| sample_snr(&spec, config, &mut RngStream::new(seed, i as u64));
    let samples = match execution {
        Execution::Serial => (0..trials).map(draw).collect::<Result<Vec<_>>>()?,
        Execution::Parallel => (0..trials)
            .into_par_iter()
            .map(draw)
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(SnrSampleSet {
        samples,
        config: config.clone(),
        seed,
        trials,
    })
}

pub fn central_moments(samples: &[f64]) -> Result<EmpiricalMoments> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    Ok(EmpiricalMoments {
        mean,
        variance: m2 / n,
        third_central: m3 / n,
    })
}

pub fn empirical_moments(s: &SnrSampleSet) -> Result<EmpiricalMoments> {
    central_moments(&s.samples)
}

/// Average of `Q(sqrt(beta))` over the draws.
pub fn empirical_ber(s: &SnrSampleSet) -> f64 {
    mean_q(&s.samples)
}

pub(crate) fn mean_q(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    samples
        .iter()
        .map(|b| q_function(b.max(0.0).sqrt()))
        .sum::<f64>()
        / samples.len() as f64
}

/// Fraction of draws strictly below `y`.
pub fn empirical_outage(s: &SnrSampleSet, y: f64) -> f64 {
    fraction_below(&s.samples, y)
}

pub(crate) fn fraction_below(samples: &[f64], y: f64) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    samples.iter().filter(|&&b| b < y).count() as f64 / samples.len() as f64
}
