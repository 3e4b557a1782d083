//! The sampler works in the eigenbasis of the correlation matrix. Drawing the
//! full model with a Cholesky square root of `Psi` must give the same law.

use lmmse_snr::linalg::cholesky;
use lmmse_snr::{
    build_correlation_matrix, central_moments, power_profile, run_trials, HermitianMatrix,
    RngStream, SystemConfig,
};
use num_complex::Complex64;

fn full_model_draw(config: &SystemConfig, rng: &mut RngStream) -> f64 {
    let (n, k) = (config.n_rx, config.k_users);
    let psi = build_correlation_matrix(n, k, config.corr_a).unwrap();
    let l = cholesky(&psi).unwrap();

    // H = L Z / sqrt(K), h0 = L z / sqrt(K)
    let mut z = vec![Complex64::new(0.0, 0.0); n * k];
    rng.fill_complex_gaussian(&mut z);
    let mut z0 = vec![Complex64::new(0.0, 0.0); n];
    rng.fill_complex_gaussian(&mut z0);
    let scale = 1.0 / (k as f64).sqrt();
    let mut h = vec![Complex64::new(0.0, 0.0); n * k];
    for j in 0..k {
        let col: Vec<Complex64> = (0..n).map(|i| z[i * k + j]).collect();
        for (i, v) in l.mul_lower(&col).into_iter().enumerate() {
            h[i * k + j] = v * scale;
        }
    }
    let h0: Vec<Complex64> = l.mul_lower(&z0).into_iter().map(|v| v * scale).collect();

    // beta = p0 h0^* (H P H^* + rho I)^{-1} h0
    let m = HermitianMatrix::from_upper_fn(n, |i, j| {
        let mut s: Complex64 = (0..k)
            .map(|c| h[i * k + c] * h[j * k + c].conj() * config.powers[c])
            .sum();
        if i == j {
            s += config.rho;
        }
        s
    })
    .unwrap();
    let f = cholesky(&m).unwrap();
    let mut x = h0.clone();
    f.solve_in_place(&mut x);
    config.p0
        * h0.iter()
            .zip(&x)
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>()
}

#[test]
fn full_and_reduced_models_agree() {
    let trials = 10_000;
    for (n, k, a) in [(4, 4, 0.9), (8, 4, 0.5)] {
        let config = SystemConfig::from_snr_db(n, k, a, 10.0, 1.0, power_profile(k, 1.0).unwrap());
        let reduced = run_trials(&config, trials, 21).unwrap().samples;
        let full: Vec<f64> = (0..trials)
            .map(|i| full_model_draw(&config, &mut RngStream::new(22, i as u64)))
            .collect();
        let r = central_moments(&reduced).unwrap();
        let f = central_moments(&full).unwrap();
        let se = ((r.variance + f.variance) / trials as f64).sqrt();
        assert!(
            (r.mean - f.mean).abs() < 3.0 * se,
            "N={n} K={k}: {} vs {} (se {se})",
            r.mean,
            f.mean
        );
        // variance check at a loose 10 %
        assert!(
            (r.variance / f.variance - 1.0).abs() < 0.1,
            "{} vs {}",
            r.variance,
            f.variance
        );
    }
}
