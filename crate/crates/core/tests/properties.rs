use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use lmmse_snr::{
    ber_qpsk, fit_from_moments, hermitian_eigenvalues, hpd_solve, moments_from_spectrum,
    outage_probability, solve_fixed_point, ComplexVector, GenGammaParams, HermitianMatrix,
    QuadratureSpec, SpectrumPair,
};

fn hermitian(n: usize, vals: &[(f64, f64)]) -> HermitianMatrix {
    HermitianMatrix::from_upper_fn(n, |i, j| {
        let (re, im) = vals[i * n + j];
        if i == j {
            Complex64::new(re, 0.0)
        } else {
            Complex64::new(re, im)
        }
    })
    .unwrap()
}

fn matrix_strategy() -> impl Strategy<Value = (usize, Vec<(f64, f64)>)> {
    (1usize..9).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((-2.0..2.0, -2.0..2.0), n * n),
        )
    })
}

fn spectrum_strategy() -> impl Strategy<Value = SpectrumPair> {
    (
        prop::collection::vec(0.05f64..3.0, 1..12),
        prop::collection::vec(0.05f64..16.0, 1..12),
    )
        .prop_map(|(d, dt)| SpectrumPair::new(d, dt).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_preserve_trace_and_frobenius((n, vals) in matrix_strategy()) {
        let m = hermitian(n, &vals);
        let eig = hermitian_eigenvalues(&m).unwrap();
        prop_assert!(eig.windows(2).all(|w| w[0] <= w[1]));
        let scale = 1.0 + m.frobenius_norm();
        prop_assert!((eig.iter().sum::<f64>() - m.trace()).abs() < 1e-10 * scale);
        let sq: f64 = eig.iter().map(|e| e * e).sum();
        prop_assert!((sq - m.frobenius_norm().powi(2)).abs() < 1e-9 * scale * scale);
    }

    #[test]
    fn hpd_solve_residual((n, vals) in matrix_strategy(), rhs in prop::collection::vec(-1.0f64..1.0, 8)) {
        // shift by the Frobenius norm to make the matrix positive definite
        let a = hermitian(n, &vals);
        let shift = a.frobenius_norm() + 0.1;
        let m = HermitianMatrix::from_upper_fn(n, |i, j| {
            a.get(i, j) + if i == j { Complex64::new(shift, 0.0) } else { Complex64::new(0.0, 0.0) }
        }).unwrap();
        let b = ComplexVector::from_real(&rhs[..n]).unwrap();
        let x = hpd_solve(&m, &b).unwrap();
        let r = m.mul_vec(&x).unwrap();
        let err: f64 = r.as_slice().iter().zip(b.as_slice()).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-10 * (1.0 + b.norm()));
    }

    #[test]
    fn fit_round_trip(alpha in 0.3f64..30.0, b in 0.05f64..20.0, xi in 0.2f64..4.0) {
        let p = GenGammaParams::new(alpha, b, xi).unwrap();
        let q = fit_from_moments(p.mean(), p.variance(), p.third_central()).unwrap();
        assert_relative_eq!(q.alpha, alpha, max_relative = 1e-9);
        assert_relative_eq!(q.b, b, max_relative = 1e-9);
        assert_relative_eq!(q.xi, xi, max_relative = 1e-9);
    }

    #[test]
    fn saddle_root_solves_first_cumulant(alpha in 0.3f64..30.0, b in 0.05f64..20.0, xi in 0.2f64..4.0, r in 0.05f64..5.0) {
        let p = GenGammaParams::new(alpha, b, xi).unwrap();
        let y = r * p.mean();
        let t = p.saddle_root(y).unwrap();
        assert_relative_eq!(p.cumulants(t).unwrap().k1, y, max_relative = 1e-10);
    }

    #[test]
    fn outage_is_a_cdf_for_xi_at_least_one(alpha in 0.5f64..20.0, b in 0.1f64..10.0, xi in 1.0f64..4.0) {
        let p = GenGammaParams::new(alpha, b, xi).unwrap();
        let mut last = 0.0;
        for i in 1..=60 {
            let y = p.mean() * 0.05 * i as f64;
            let v = outage_probability(&p, y).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(v >= last - 1e-9, "y={y}: {v} < {last}");
            last = v;
        }
    }

    #[test]
    fn ber_decreases_with_scale(alpha in 0.5f64..20.0, b in 0.05f64..10.0, xi in 0.3f64..4.0) {
        let q = QuadratureSpec::default();
        let lo = ber_qpsk(&GenGammaParams::new(alpha, b, xi).unwrap(), &q).unwrap();
        let hi = ber_qpsk(&GenGammaParams::new(alpha, 2.0 * b, xi).unwrap(), &q).unwrap();
        prop_assert!(0.0 < hi && hi < lo && lo < 0.5);
    }

    #[test]
    fn fixed_point_satisfies_both_equations(spec in spectrum_strategy(), log_t in -3.0f64..4.0) {
        let t = 10f64.powf(log_t);
        let fp = solve_fixed_point(&spec, t, 1e-12).unwrap();
        let k = spec.k() as f64;
        let delta: f64 = spec.d().iter().map(|d| d / (1.0 + t * fp.delta_tilde * d)).sum::<f64>() / k;
        let delta_tilde: f64 = spec.d_tilde().iter().map(|d| d / (1.0 + t * fp.delta * d)).sum::<f64>() / k;
        prop_assert!(fp.delta > 0.0 && fp.delta_tilde > 0.0);
        prop_assert!((delta - fp.delta).abs() <= 1e-11 * (1.0 + fp.delta));
        prop_assert!((delta_tilde - fp.delta_tilde).abs() <= 1e-11 * (1.0 + fp.delta_tilde));
    }

    #[test]
    fn moments_invariant_under_joint_scaling(spec in spectrum_strategy(), rho in 0.01f64..10.0, c in 0.1f64..10.0) {
        let base = match moments_from_spectrum(&spec, rho, 1.0, 1e-12) {
            Ok(m) => m,
            Err(_) => return Ok(()),
        };
        let scaled_powers: Vec<f64> = spec.d_tilde().iter().map(|p| p * c).collect();
        let scaled_spec = SpectrumPair::new(spec.d().to_vec(), scaled_powers).unwrap();
        let m = moments_from_spectrum(&scaled_spec, rho * c, c, 1e-12).unwrap();
        assert_relative_eq!(m.mean, base.mean, max_relative = 1e-9);
        assert_relative_eq!(m.variance, base.variance, max_relative = 1e-9);
        assert_relative_eq!(m.third_central, base.third_central, max_relative = 1e-8);
    }
}
