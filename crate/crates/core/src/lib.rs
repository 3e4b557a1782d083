//! Output SNR statistics of the LMMSE receiver on receive-correlated MIMO
//! channels.
//!
//! The crate goes from a [`SystemConfig`] to:
//!
//! * deterministic equivalents of the first three moments of the SNR
//!   ([`asymptotic_moments`]),
//! * a moment-matched generalized Gamma law ([`fit_from_moments`]),
//! * analytic QPSK bit error rate ([`ber_qpsk`]) and saddle-point outage
//!   probability ([`outage_probability`]),
//!
//! and provides a Monte Carlo sampler of the exact SNR ([`run_trials`]) to
//! check all of the above.
//!
//! ```
//! use lmmse_snr::{fitted_law, ber_qpsk, power_profile, QuadratureSpec, SystemConfig};
//!
//! let config = SystemConfig::from_snr_db(8, 8, 0.3, 15.0, 1.0, power_profile(8, 1.0)?);
//! let (moments, law) = fitted_law(&config)?;
//! let ber = ber_qpsk(&law, &QuadratureSpec::default())?;
//! assert!(moments.mean > 0.0 && ber < 0.5);
//! # Ok::<(), lmmse_snr::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
// reference values in tests keep every digit they were printed with
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod channel;
pub mod error;
pub mod gengamma;
pub mod linalg;
pub mod metrics;
pub mod moments;
pub mod montecarlo;
pub mod rng;
pub mod special;

pub use channel::{
    build_correlation_matrix, correlation_spectrum, db_to_linear, parse_power_file, power_profile,
    read_power_file, validate_config, SpectrumPair, SystemConfig,
};
pub use error::{Error, Result};
pub use gengamma::{fit_from_moments, Cumulants, GenGammaParams};
pub use linalg::{hermitian_eigenvalues, hpd_solve, ComplexVector, HermitianMatrix};
pub use metrics::{
    ber_curve, ber_qpsk, fitted_law, outage_curve, outage_estimate, outage_probability, BerRow,
    EmpiricalSpec, OutageEstimate, OutageRow, QuadratureSpec,
};
pub use moments::{
    asymptotic_moments, auxiliary_quantities, moments_from_spectrum, solve_fixed_point,
    AsymptoticMoments, AuxiliaryQuantities, FixedPointSolution,
};
pub use montecarlo::{
    central_moments, empirical_ber, empirical_moments, empirical_outage, run_trials,
    run_trials_with, sample_snr, EmpiricalMoments, Execution, SnrSampleSet,
};
pub use rng::{sample_standard_complex_gaussian, RngStream};
pub use special::{normal_cdf, normal_pdf, q_function};
